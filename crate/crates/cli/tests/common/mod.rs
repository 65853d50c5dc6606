//! The documented example invocations and their expected transcripts.

#![allow(dead_code)]

use std::process::Command;

pub const LAW_NAMES: [&str; 13] = [
    "domination",
    "identity",
    "commutation",
    "averaging",
    "remainder_fold",
    "limsup_oracle",
    "duality_bounds",
    "monotonicity",
    "subadditivity",
    "linearity",
    "uniform_limit",
    "excision",
    "division",
];

pub fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(args: &[String]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_transmean"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

pub enum Expect {
    /// Stdout, byte for byte.
    Stdout(String),
    /// A line that must appear in stdout.
    StdoutLine(String),
    /// Every `LAW` line passes (or, with `false`, at least one fails).
    AllLaws(bool),
    /// Text that must appear in stderr.
    Stderr(String),
}

pub struct Golden {
    pub args: Vec<String>,
    pub expect: Expect,
    pub code: i32,
}

fn g(args: &[&str], expect: Expect, code: i32) -> Golden {
    Golden {
        args: args.iter().map(|s| s.to_string()).collect(),
        expect,
        code,
    }
}

fn out(s: &str) -> Expect {
    Expect::Stdout(s.to_string())
}

pub fn goldens() -> Vec<Golden> {
    let three = data("three.space");
    let short = data("short_mass.space");
    let vacuous: String = LAW_NAMES
        .iter()
        .map(|n| format!("LAW {n} PASS cases=0 failures=0\n"))
        .collect();
    let built = "repw(cat(const(a;3), const(b;2), const(c;1)))";
    vec![
        g(&["ord", "add", "1", "w"], out("w\n"), 0),
        g(
            &["ord", "decomp", "w^2*3 + w*2 + 5"],
            out("sigma=2 n=3 rho=w*2 + 5\n"),
            0,
        ),
        g(&["ord", "cmp", "w", "w+1"], out("less\n"), 0),
        g(
            &["mean", "cat(const(1;3), const(0;w))"],
            out("upper=0 lower=0 mean=0\n"),
            0,
        ),
        g(&["mean", "osc(0,1)"], out("upper=2/3 lower=1/3 mean=none\n"), 0),
        g(
            &["mean", "const(3/2; w^w)"],
            out("upper=3/2 lower=3/2 mean=3/2\n"),
            0,
        ),
        g(
            &["divide", "repw(cat(const(0;w),const(1;w)))", "w"],
            out("repw(cat(const(0;1), const(1;1)))\n"),
            0,
        ),
        g(&["divide", "const(1; w+1)", "w"], out("NotDivisible\n"), 1),
        g(&["divide", "const(c;w)", "w"], out("const(c;1)\n"), 0),
        g(
            &["laws", "run", "--seed", "42", "--cases", "1000"],
            Expect::AllLaws(true),
            0,
        ),
        g(&["laws", "run", "--seed", "42", "--cases", "0"], Expect::Stdout(vacuous), 0),
        g(
            &["laws", "run", "--seed", "42", "--cases", "200", "--mutant", "skewed-oscillator"],
            Expect::AllLaws(false),
            1,
        ),
        g(
            &["capture", "build", &three, "--depth", "1"],
            out(&format!("{built}\n")),
            0,
        ),
        g(
            &["capture", "verify", &three, "--seq", built, "--resolution", "w"],
            Expect::StdoutLine("EVENT {a,c} m=2/3 M=2/3 PASS".to_string()),
            0,
        ),
        g(
            &["capture", "verify", &short, "--resolution", "w"],
            Expect::Stderr("masses sum to 5/6".to_string()),
            2,
        ),
    ]
}

/// Runs one golden; `Err` describes the first mismatch.
pub fn check(golden: &Golden) -> Result<(), String> {
    let r = run(&golden.args);
    let shown = golden.args.join(" ");
    if r.code != golden.code {
        return Err(format!(
            "`{shown}` exited {} (want {}); stderr: {}",
            r.code, golden.code, r.stderr
        ));
    }
    let ok = match &golden.expect {
        Expect::Stdout(want) => r.stdout == *want,
        Expect::StdoutLine(line) => r.stdout.lines().any(|l| l == line),
        Expect::AllLaws(pass) => {
            let laws: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("LAW ")).collect();
            laws.len() == LAW_NAMES.len()
                && if *pass {
                    laws.iter().all(|l| l.contains(" PASS "))
                } else {
                    laws.iter().any(|l| l.contains(" FAIL "))
                }
        }
        Expect::Stderr(text) => r.stderr.contains(text.as_str()),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("`{shown}` printed:\n{}{}", r.stdout, r.stderr))
    }
}
