//! Tokenizer for the supported Java subset.
//!
//! Comments are skipped; every token carries its line, column and byte span
//! so expressions can be sliced back out of the source text.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident,
    IntLit,
    FloatLit,
    StrLit,
    CharLit,
    Punct,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.text == text
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    Lexer::new(src).run()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

// Multi-character operators, longest first so greedy matching works.
const PUNCTS: &[&str] = &[
    ">>>=", ">>>", "<<=", ">>=", "...", "->", "::", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "+", "-", "*", "/", "%", "=",
    "<", ">", "!", "~", "&", "|", "^", "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
    "@",
];

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn error(&self, message: &str) -> SyntaxError {
        SyntaxError { line: self.line, col: self.col, message: message.to_owned() }
    }

    fn run(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            let (line, col, start) = (self.line, self.col, self.pos);
            let Some(b) = self.peek() else {
                out.push(Token {
                    kind: TokKind::Eof,
                    text: String::new(),
                    line,
                    col,
                    start,
                    end: start,
                });
                return Ok(out);
            };
            let kind = if b.is_ascii_alphabetic() || b == b'_' || b == b'$' || b >= 0x80 {
                self.ident();
                TokKind::Ident
            } else if b.is_ascii_digit() || (b == b'.' && self.peek_at(1).is_some_and(|c| c.is_ascii_digit())) {
                self.number()
            } else if b == b'"' {
                self.string()?
            } else if b == b'\'' {
                self.char_lit()?;
                TokKind::CharLit
            } else {
                self.punct()?;
                TokKind::Punct
            };
            out.push(Token {
                kind,
                text: self.src[start..self.pos].to_owned(),
                line,
                col,
                start,
                end: self.pos,
            });
        }
    }

    fn skip_trivia(&mut self) -> Result<(), SyntaxError> {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.peek_at(1) == Some(b'/') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some(b'/') if self.peek_at(1) == Some(b'*') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek() {
                            Some(b'*') if self.peek_at(1) == Some(b'/') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                            None => {
                                return Err(SyntaxError {
                                    line,
                                    col,
                                    message: "unterminated block comment".to_owned(),
                                })
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn ident(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' || b == b'$' || b >= 0x80 {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> TokKind {
        let mut float = false;
        if self.peek() == Some(b'0')
            && matches!(self.peek_at(1), Some(b'x') | Some(b'X') | Some(b'b') | Some(b'B'))
        {
            self.bump();
            self.bump();
            while let Some(b) = self.peek() {
                if b.is_ascii_hexdigit() || b == b'_' {
                    self.bump();
                } else {
                    break;
                }
            }
        } else {
            while let Some(b) = self.peek() {
                if b.is_ascii_digit() || b == b'_' {
                    self.bump();
                } else {
                    break;
                }
            }
            if self.peek() == Some(b'.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
                float = true;
                self.bump();
                while let Some(b) = self.peek() {
                    if b.is_ascii_digit() || b == b'_' {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            if matches!(self.peek(), Some(b'e') | Some(b'E')) {
                float = true;
                self.bump();
                if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    self.bump();
                }
                while let Some(b) = self.peek() {
                    if b.is_ascii_digit() {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
        }
        match self.peek() {
            Some(b'f') | Some(b'F') | Some(b'd') | Some(b'D') => {
                float = true;
                self.bump();
            }
            Some(b'l') | Some(b'L') => {
                self.bump();
            }
            _ => {}
        }
        if float {
            TokKind::FloatLit
        } else {
            TokKind::IntLit
        }
    }

    fn string(&mut self) -> Result<TokKind, SyntaxError> {
        // Text block?
        if self.peek_at(1) == Some(b'"') && self.peek_at(2) == Some(b'"') {
            let (line, col) = (self.line, self.col);
            self.bump();
            self.bump();
            self.bump();
            loop {
                if self.peek() == Some(b'"')
                    && self.peek_at(1) == Some(b'"')
                    && self.peek_at(2) == Some(b'"')
                {
                    self.bump();
                    self.bump();
                    self.bump();
                    return Ok(TokKind::StrLit);
                }
                if self.peek() == Some(b'\\') {
                    self.bump();
                }
                if self.bump().is_none() {
                    return Err(SyntaxError {
                        line,
                        col,
                        message: "unterminated text block".to_owned(),
                    });
                }
            }
        }
        self.bump();
        loop {
            match self.peek() {
                Some(b'"') => {
                    self.bump();
                    return Ok(TokKind::StrLit);
                }
                Some(b'\\') => {
                    self.bump();
                    self.bump();
                }
                Some(b'\n') | None => return Err(self.error("unterminated string literal")),
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn char_lit(&mut self) -> Result<(), SyntaxError> {
        self.bump();
        loop {
            match self.peek() {
                Some(b'\'') => {
                    self.bump();
                    return Ok(());
                }
                Some(b'\\') => {
                    self.bump();
                    self.bump();
                }
                Some(b'\n') | None => return Err(self.error("unterminated char literal")),
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn punct(&mut self) -> Result<(), SyntaxError> {
        let rest = &self.src[self.pos..];
        for p in PUNCTS {
            if rest.starts_with(p) {
                for _ in 0..p.len() {
                    self.bump();
                }
                return Ok(());
            }
        }
        Err(self.error("unexpected character"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src).unwrap().into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(texts("a.b(1, \"x\")"), ["a", ".", "b", "(", "1", ",", "\"x\"", ")", ""]);
    }

    #[test]
    fn greedy_operators() {
        assert_eq!(texts("a >>>= b >>> c >> d"), ["a", ">>>=", "b", ">>>", "c", ">>", "d", ""]);
        assert_eq!(texts("x->y::z"), ["x", "->", "y", "::", "z", ""]);
    }

    #[test]
    fn comments_and_lines() {
        let toks = tokenize("a // c\n/* b\n */ b").unwrap();
        assert_eq!(toks[0].line, 1);
        assert_eq!(toks[1].text, "b");
        assert_eq!(toks[1].line, 3);
    }

    #[test]
    fn literals() {
        let toks = tokenize("0x1F 1_000 3.14 2e10 'a' '\\n' \"s\\\"t\"").unwrap();
        assert_eq!(toks[0].kind, TokKind::IntLit);
        assert_eq!(toks[1].kind, TokKind::IntLit);
        assert_eq!(toks[2].kind, TokKind::FloatLit);
        assert_eq!(toks[3].kind, TokKind::FloatLit);
        assert_eq!(toks[4].kind, TokKind::CharLit);
        assert_eq!(toks[5].kind, TokKind::CharLit);
        assert_eq!(toks[6].kind, TokKind::StrLit);
    }

    #[test]
    fn unterminated_string_is_error() {
        assert!(tokenize("\"abc").is_err());
    }
}
