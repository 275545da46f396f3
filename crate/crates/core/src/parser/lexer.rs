use std::fmt;
use std::sync::Arc;

use super::ParseError;

/// Location of a token: 1-based line and column range (end exclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col_start)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sub,
    Amp,
    Dot,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sub => f.write_str("`[=`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str, file: &Arc<str>) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = vec![];
    for (line_idx, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        let span = |start: usize, end: usize| SourceSpan {
            file: file.clone(),
            line: line_idx + 1,
            col_start: start + 1,
            col_end: end + 1,
        };
        while i < chars.len() {
            let c = chars[i];
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if is_ident_start(c) {
                let start = i;
                while i < chars.len() && is_ident_continue(chars[i]) {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), span(start, i)));
                continue;
            }
            let (tok, len) = match c {
                '[' if chars.get(i + 1) == Some(&'=') => (Tok::Sub, 2),
                '&' => (Tok::Amp, 1),
                '.' => (Tok::Dot, 1),
                ',' => (Tok::Comma, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ':' => (Tok::Colon, 1),
                other => {
                    return Err(ParseError::Syntax {
                        span: span(i, i + 1),
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push((tok, span(i, i + len)));
            i += len;
        }
    }
    let line = text.lines().count().max(1);
    out.push((
        Tok::Eof,
        SourceSpan {
            file: file.clone(),
            line,
            col_start: 1,
            col_end: 1,
        },
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_spans() {
        let file: Arc<str> = Arc::from("t");
        let toks = tokenize("A [= Ex R.B' # note\n  {a}.", &file).unwrap();
        let kinds: Vec<_> = toks.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("A".into()),
                Tok::Sub,
                Tok::Ident("Ex".into()),
                Tok::Ident("R".into()),
                Tok::Dot,
                Tok::Ident("B'".into()),
                Tok::LBrace,
                Tok::Ident("a".into()),
                Tok::RBrace,
                Tok::Dot,
                Tok::Eof,
            ]
        );
        assert_eq!((toks[1].1.line, toks[1].1.col_start, toks[1].1.col_end), (1, 3, 5));
        assert_eq!((toks[6].1.line, toks[6].1.col_start), (2, 3));
    }

    #[test]
    fn stray_character_is_an_error() {
        let file: Arc<str> = Arc::from("t");
        assert!(matches!(
            tokenize("A ~ B", &file),
            Err(ParseError::Syntax { span, .. }) if span.col_start == 3
        ));
    }
}
