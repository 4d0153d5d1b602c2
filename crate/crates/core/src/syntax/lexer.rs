use super::{ErrorCode, ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Identifier or numeral.
    Word(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Pipe,
    Amp,
    Bang,
    Neq,
    Eq,
    Arrow,
    Slash,
    AuxMark,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Slash => "`/`".into(),
            Tok::AuxMark => "`^aux`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let span = |start: usize, end: usize, line: usize, col: usize| SourceSpan {
        line,
        column: col,
        start,
        end,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = if c.is_ascii_alphanumeric() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Word(src[start..i].to_string())
        } else if two == Some(b"!=") {
            i += 2;
            Tok::Neq
        } else if two == Some(b"->") {
            i += 2;
            Tok::Arrow
        } else if bytes[i..].starts_with(b"^aux") {
            i += 4;
            Tok::AuxMark
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b':' => Tok::Colon,
                b'|' => Tok::Pipe,
                b'&' => Tok::Amp,
                b'!' => Tok::Bang,
                b'=' => Tok::Eq,
                b'/' => Tok::Slash,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    let end = start + ch.len_utf8();
                    return Err(ParseError::new(
                        span(start, end, line, col),
                        ErrorCode::Lex,
                        format!("unexpected character {ch:?}"),
                    ));
                }
            }
        };
        out.push(Token {
            tok,
            span: span(start, i, line, col),
        });
        col += src[start..i].chars().count();
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(bytes.len(), bytes.len(), line, col),
    });
    Ok(out)
}
