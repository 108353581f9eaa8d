//! A small character scanner shared by the text parsers. Tracks line and
//! column, skips whitespace and `%` comments.

use crate::parse::ParseError;

pub(crate) struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
}

impl Scanner {
    pub fn new(src: &str) -> Self {
        Scanner { chars: src.chars().collect(), pos: 0, line: 1, col: 1 }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn advance(&mut self) -> Option<char> {
        let c = *self.chars.get(self.pos)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and comments; returns the next significant char
    /// without consuming it.
    pub fn peek(&mut self) -> Option<char> {
        loop {
            match self.chars.get(self.pos).copied() {
                Some(c) if c.is_whitespace() => {
                    self.advance();
                }
                Some('%') => {
                    while let Some(c) = self.advance() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                other => return other,
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Position of the next significant character.
    pub fn position(&mut self) -> (u32, u32) {
        self.peek();
        (self.line, self.col)
    }

    /// Consumes the expected punctuation character.
    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.advance();
                Ok(())
            }
            Some(found) => Err(self.error(format!("expected `{c}`, found `{found}`"))),
            None => Err(self.error(format!("expected `{c}`, found end of input"))),
        }
    }

    /// Consumes `c` if it is next; reports whether it did.
    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    /// Consumes a multi-char operator like `:-` or `<->` if it is next.
    pub fn eat_str(&mut self, s: &str) -> bool {
        self.peek();
        for (offset, expected) in s.chars().enumerate() {
            if self.chars.get(self.pos + offset).copied() != Some(expected) {
                return false;
            }
        }
        for _ in s.chars() {
            self.advance();
        }
        true
    }

    /// Reads an identifier or keyword: `[A-Za-z_#][A-Za-z0-9_]*`.
    pub fn ident(&mut self) -> Option<String> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '#' => {}
            _ => return None,
        }
        let mut s = String::new();
        s.push(self.advance().unwrap());
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.advance();
                s.push(c);
            } else {
                break;
            }
        }
        Some(s)
    }

    /// Reads an unsigned decimal integer.
    pub fn integer(&mut self) -> Option<Result<u32, ParseError>> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {}
            _ => return None,
        }
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                self.advance();
                s.push(c);
            } else {
                break;
            }
        }
        Some(s.parse::<u32>().map_err(|_| self.error(format!("integer `{s}` out of range"))))
    }

    pub fn rest_is_empty(&mut self) -> Result<(), ParseError> {
        if let Some(c) = self.peek() {
            return Err(self.error(format!("unexpected `{c}`")));
        }
        Ok(())
    }
}
