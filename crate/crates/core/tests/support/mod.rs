pub mod ordinal_oracle;
