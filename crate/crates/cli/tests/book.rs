//! Runs the console transcripts in the guide against the binary.

use std::path::PathBuf;
use std::process::Command;

fn book_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../book")
}

/// Splits on whitespace, honouring single quotes.
fn words(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let (mut quoted, mut any) = (false, false);
    for c in line.chars() {
        match c {
            '\'' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if any {
        out.push(cur);
    }
    out
}

struct Step {
    command: String,
    expected: String,
}

fn transcripts(markdown: &str) -> Vec<Vec<Step>> {
    let mut blocks = Vec::new();
    let mut lines = markdown.lines();
    while let Some(line) = lines.next() {
        if line.trim() != "```console" {
            continue;
        }
        let mut steps: Vec<Step> = Vec::new();
        for line in lines.by_ref() {
            if line.trim() == "```" {
                break;
            }
            match line.strip_prefix("$ ") {
                Some(cmd) => steps.push(Step {
                    command: cmd.to_string(),
                    expected: String::new(),
                }),
                None => {
                    let step = steps.last_mut().expect("output before any command");
                    step.expected.push_str(line);
                    step.expected.push('\n');
                }
            }
        }
        blocks.push(steps);
    }
    blocks
}

#[test]
fn cli_chapter_transcripts() {
    let text = std::fs::read_to_string(book_dir().join("src/cli.md")).unwrap();
    let blocks = transcripts(&text);
    assert!(blocks.len() >= 5);
    for steps in blocks {
        let mut last_status = None;
        for step in steps {
            let actual = if step.command == "echo $?" {
                format!("{}\n", last_status.expect("`echo $?` before any command"))
            } else {
                let argv = words(&step.command);
                assert_eq!(argv[0], "spapprox", "{}", step.command);
                let out = Command::new(env!("CARGO_BIN_EXE_spapprox"))
                    .args(&argv[1..])
                    .current_dir(book_dir())
                    .output()
                    .unwrap();
                last_status = out.status.code();
                String::from_utf8(out.stdout).unwrap()
            };
            assert_eq!(actual, step.expected, "`{}`", step.command);
        }
    }
}

#[test]
fn quoting() {
    assert_eq!(words("a 'b c' d'->'e"), ["a", "b c", "d->e"]);
}
