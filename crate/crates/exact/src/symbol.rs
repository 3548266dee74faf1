use std::fmt;
use std::sync::Arc;

/// Name of a polynomial generator.
///
/// The generator [`Symbol::s`] (named `s`) is the square root of the quantum
/// parameter: `q = s^2`. Generators named `sqrt(x)` are square roots of a
/// parameter `x` that is only ever used through its root. All other symbols
/// are free formal parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

/// Reserved name of the generator `s = q^(1/2)`.
pub const SQRT_Q: &str = "s";

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    /// The generator `s` with `q = s^2`.
    pub fn s() -> Self {
        Symbol::new(SQRT_Q)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_sqrt_q(&self) -> bool {
        &*self.0 == SQRT_Q
    }

    /// The generator `sqrt(name)`.
    pub fn sqrt_of(name: &str) -> Self {
        Symbol(Arc::from(format!("sqrt({name})")))
    }

    /// For square-root generators, the name of the squared quantity
    /// (`q` for `s`, `x` for `sqrt(x)`).
    pub fn root_of(&self) -> Option<&str> {
        if self.is_sqrt_q() {
            return Some("q");
        }
        self.0.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')'))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}
