use super::{Diagnostic, DiagnosticKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Signed integer or `p/q`, kept as written.
    Number(String),
    Eq,
    Ne,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    At,
    Newline,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("`{s}`"),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::At => "`@`".into(),
            Tok::Newline => "end of line".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'
}

/// Splits `text` into tokens. Characters that start no token are reported
/// and skipped so that later errors are still found.
pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |tok, tokens: &mut Vec<Token>| {
                tokens.push(Token {
                    tok,
                    line: l + 1,
                    column,
                })
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let next = chars.get(i + 1).copied();
            if ident_start(c) {
                let start = i;
                while i < chars.len() && ident_continue(chars[i]) {
                    i += 1;
                }
                push(Tok::Ident(chars[start..i].iter().collect()), &mut tokens);
                continue;
            }
            if c.is_ascii_digit()
                || ((c == '+' || c == '-') && next.is_some_and(|n| n.is_ascii_digit()))
            {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                push(Tok::Number(chars[start..i].iter().collect()), &mut tokens);
                continue;
            }
            let (tok, width) = match (c, next) {
                ('=', Some('>')) => (Tok::Arrow, 2),
                ('!', Some('=')) => (Tok::Ne, 2),
                ('=', _) => (Tok::Eq, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                ('@', _) => (Tok::At, 1),
                _ => {
                    diags.push(Diagnostic::new(
                        l + 1,
                        column,
                        DiagnosticKind::Lexical,
                        format!("unexpected character `{c}`"),
                    ));
                    i += 1;
                    continue;
                }
            };
            push(tok, &mut tokens);
            i += width;
        }
        tokens.push(Token {
            tok: Tok::Newline,
            line: l + 1,
            column: chars.len() + 1,
        });
    }
    (tokens, diags)
}
