//! Arithmetic expressions in one variable `x`, used for initial data.

use std::fmt;

use crate::error::{NsfError, Result};

/// Parsed expression over `x` with `+ - * / ^`, `sin cos tan exp log sqrt
/// tanh abs` and the constants `pi`, `e`. `log` is the natural logarithm.
pub struct Expr {
    source: String,
    f: Box<dyn Fn(f64) -> f64>,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Expr").field(&self.source).finish()
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let parsed: meval::Expr = src.parse().map_err(|e: meval::Error| NsfError::Expr(format!("{src:?}: {e}")))?;
        let mut ctx = meval::Context::new();
        ctx.func("log", f64::ln);
        let f = parsed.bind_with_context(ctx, "x").map_err(|e| NsfError::Expr(format!("{src:?}: {e}")))?;
        Ok(Self {
            source: src.to_string(),
            f: Box::new(f),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}
