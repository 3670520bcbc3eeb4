//! Minimal s-expression reader with source positions, tolerant of SMTLIB2
//! comments, string literals and |quoted symbols|.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
    pub byte: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExp {
    Atom(String, Pos),
    List(Vec<SExp>, Pos),
}

impl SExp {
    pub fn pos(&self) -> Pos {
        match self {
            SExp::Atom(_, p) | SExp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            SExp::Atom(s, _) => Some(s),
            SExp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[SExp]> {
        match self {
            SExp::List(items, _) => Some(items),
            SExp::Atom(..) => None,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SexpError {
    #[error("{0}: unexpected end of input")]
    UnexpectedEof(Pos),
    #[error("{0}: unmatched ')'")]
    UnmatchedClose(Pos),
    #[error("{0}: unterminated {1}")]
    Unterminated(Pos, &'static str),
}

struct Reader<'a> {
    src: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader { src: src.as_bytes(), i: 0, line: 1, col: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col, byte: self.i }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.i += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == b';' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<SExp, SexpError> {
        self.skip_trivia();
        let start = self.pos();
        match self.peek() {
            None => Err(SexpError::UnexpectedEof(start)),
            Some(b'(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(SexpError::Unterminated(start, "list")),
                        Some(b')') => {
                            self.bump();
                            return Ok(SExp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(b')') => Err(SexpError::UnmatchedClose(start)),
            Some(b'"') => {
                self.bump();
                let mut s = String::from("\"");
                loop {
                    match self.bump() {
                        None => return Err(SexpError::Unterminated(start, "string literal")),
                        Some(b'"') => {
                            // "" escapes a quote inside SMTLIB2 strings
                            if self.peek() == Some(b'"') {
                                self.bump();
                                s.push('"');
                            } else {
                                s.push('"');
                                return Ok(SExp::Atom(s, start));
                            }
                        }
                        Some(c) => s.push(c as char),
                    }
                }
            }
            Some(b'|') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(SexpError::Unterminated(start, "quoted symbol")),
                        Some(b'|') => return Ok(SExp::Atom(s, start)),
                        Some(c) => s.push(c as char),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b';' {
                        break;
                    }
                    s.push(self.bump().unwrap() as char);
                }
                Ok(SExp::Atom(s, start))
            }
        }
    }
}

/// Read every top-level s-expression in `src`.
pub fn read_all(src: &str) -> Result<Vec<SExp>, SexpError> {
    let mut r = Reader::new(src);
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Read a single s-expression, ignoring trailing input.
pub fn read_one(src: &str) -> Result<SExp, SexpError> {
    Reader::new(src).read()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_comments() {
        let es = read_all("; hello\n(a (b c) 12)\n(d)").unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[0].list().unwrap()[0].atom(), Some("a"));
        assert_eq!(es[0].list().unwrap()[2].atom(), Some("12"));
    }

    #[test]
    fn unterminated_list_reports_position() {
        let err = read_all("(a (b").unwrap_err();
        assert!(matches!(err, SexpError::Unterminated(..)));
    }

    #[test]
    fn quoted_symbols() {
        let es = read_all("(|odd name| x)").unwrap();
        assert_eq!(es[0].list().unwrap()[0].atom(), Some("odd name"));
    }
}
