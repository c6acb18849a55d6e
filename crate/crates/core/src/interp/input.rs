//! Formatted extraction from the predetermined input text, following the
//! rules of `std::cin >> x` for each scalar type.

use crate::ccr::TypeTag;
use crate::value::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    /// Only whitespace was left.
    Exhausted,
    /// The next characters do not form a value of the requested type.
    Invalid(String),
}

#[derive(Debug, Clone)]
pub struct Input {
    chars: Vec<char>,
    pos: usize,
}

impl Input {
    pub fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_whitespace(&mut self) -> Result<(), InputError> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        if self.peek().is_none() {
            Err(InputError::Exhausted)
        } else {
            Ok(())
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn sign(&mut self) {
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
    }

    fn text(&self, start: usize) -> String {
        self.chars[start..self.pos].iter().collect()
    }

    fn invalid(&self, ty: &str) -> InputError {
        let rest: String = self.chars[self.pos..]
            .iter()
            .take_while(|c| !c.is_whitespace())
            .collect();
        InputError::Invalid(format!("cannot read {ty} from input {rest:?}"))
    }

    pub fn read(&mut self, ty: &TypeTag) -> Result<Scalar, InputError> {
        self.skip_whitespace()?;
        match ty {
            TypeTag::Int => self.read_int().map(Scalar::Int),
            TypeTag::Bool => {
                let start = self.pos;
                match self.read_int() {
                    Ok(0) => Ok(Scalar::Bool(false)),
                    Ok(1) => Ok(Scalar::Bool(true)),
                    _ => {
                        self.pos = start;
                        Err(self.invalid("bool"))
                    }
                }
            }
            TypeTag::Char => {
                let c = self.peek().expect("non-empty after skipping whitespace");
                self.pos += 1;
                Ok(Scalar::Char(c))
            }
            TypeTag::String => {
                let start = self.pos;
                while self.peek().is_some_and(|c| !c.is_whitespace()) {
                    self.pos += 1;
                }
                Ok(Scalar::String(self.text(start)))
            }
            TypeTag::Double => self.read_double().map(Scalar::Double),
            TypeTag::Container { .. } => Err(InputError::Invalid("cannot read a container".into())),
        }
    }

    fn read_int(&mut self) -> Result<i64, InputError> {
        let start = self.pos;
        self.sign();
        if self.digits() == 0 {
            self.pos = start;
            return Err(self.invalid("int"));
        }
        let text = self.text(start);
        text.parse().map_err(|_| {
            self.pos = start;
            self.invalid("int")
        })
    }

    fn read_double(&mut self) -> Result<f64, InputError> {
        let start = self.pos;
        self.sign();
        let mut mantissa = self.digits();
        if self.peek() == Some('.') {
            self.pos += 1;
            mantissa += self.digits();
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.invalid("double"));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let before_exp = self.pos;
            self.pos += 1;
            self.sign();
            if self.digits() == 0 {
                self.pos = before_exp;
            }
        }
        let value: f64 = self.text(start).parse().map_err(|_| self.invalid("double"))?;
        if value.is_finite() {
            Ok(value)
        } else {
            self.pos = start;
            Err(self.invalid("double"))
        }
    }
}
