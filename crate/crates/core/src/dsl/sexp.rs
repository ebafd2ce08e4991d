//! S-expression reader with source positions.

use std::fmt;

use super::ParseError;

/// 1-based line and column of a token's first character.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Span),
    List(Vec<Sexp>, Span),
}

impl Sexp {
    pub fn span(&self) -> Span {
        match self {
            Sexp::Atom(_, s) | Sexp::List(_, s) => *s,
        }
    }

}

/// Reads every top-level expression. `#` starts a comment running to the
/// end of the line.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<(Vec<Sexp>, Span)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let here = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            '(' => {
                chars.next();
                col += 1;
                stack.push((Vec::new(), here));
            }
            ')' => {
                chars.next();
                col += 1;
                let (items, span) = stack.pop().ok_or_else(|| ParseError::syntax(here, "unexpected `)`"))?;
                let list = Sexp::List(items, span);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '#' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                let atom = Sexp::Atom(s, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((_, span)) = stack.last() {
        return Err(ParseError::syntax(*span, "unclosed `(`"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let s = read_all("# header\n(a (b c))\n  d").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].span(), Span { line: 2, col: 1 });
        assert_eq!(s[1].span(), Span { line: 3, col: 3 });
        match &s[0] {
            Sexp::List(items, _) => assert_eq!(items[1].span(), Span { line: 2, col: 4 }),
            _ => panic!("expected a list"),
        }
    }

    #[test]
    fn unbalanced() {
        let e = read_all("(a (b)").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 1, col: 1, .. }));
        assert!(matches!(read_all("a)").unwrap_err(), ParseError::Syntax { line: 1, col: 2, .. }));
    }
}
