use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(super) enum Tok {
    Word(String),
    /// Digits, optionally followed by `/digits`; kept as written so cylinder
    /// addresses such as `02` survive.
    Number(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) | Tok::Number(w) => f.write_str(w),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

const SYMBOLS: &[char] = &['(', ')', '[', ']', '{', '}', ',', '|', ':', '>', '-', '*', '∪', '∩', '∅'];

pub(super) fn tokenize(input: &str) -> Result<Vec<Token>, (usize, char)> {
    let mut out = Vec::new();
    let mut it = input.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut w = String::new();
            while let Some(&(_, c)) = it.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                w.push(c);
                it.next();
            }
            out.push(Token { tok: Tok::Word(w), pos });
        } else if c.is_ascii_digit() {
            let mut w = String::new();
            take_digits(&mut it, &mut w);
            let rest = &input[pos + w.len()..];
            if rest.starts_with('/') && rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
                it.next();
                w.push('/');
                take_digits(&mut it, &mut w);
            }
            out.push(Token { tok: Tok::Number(w), pos });
        } else if SYMBOLS.contains(&c) {
            out.push(Token { tok: Tok::Sym(c), pos });
            it.next();
        } else {
            return Err((pos, c));
        }
    }
    Ok(out)
}

fn take_digits(it: &mut std::iter::Peekable<std::str::CharIndices<'_>>, w: &mut String) {
    while let Some(&(_, c)) = it.peek() {
        if !c.is_ascii_digit() {
            break;
        }
        w.push(c);
        it.next();
    }
}
