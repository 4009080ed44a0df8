//! Calculator tools offered to the model in step 3.

use std::fmt;
use std::str::FromStr;

use rust_decimal::prelude::{FromPrimitive, ToPrimitive};
use rust_decimal::{Decimal, MathematicalOps, RoundingStrategy};

pub const CALC_DECIMALS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CalcOp {
    Multiply,
    Divide,
    Minus,
    Add,
    Sqrt,
}

impl CalcOp {
    pub const ALL: [CalcOp; 5] = [
        CalcOp::Multiply,
        CalcOp::Divide,
        CalcOp::Minus,
        CalcOp::Add,
        CalcOp::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CalcOp::Multiply => "Multiply",
            CalcOp::Divide => "Divide",
            CalcOp::Minus => "Minus",
            CalcOp::Add => "Add",
            CalcOp::Sqrt => "Sqrt",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            CalcOp::Sqrt => 1,
            _ => 2,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CalcOp::Multiply => "Multiply two numbers: a * b",
            CalcOp::Divide => "Divide two numbers: a / b",
            CalcOp::Minus => "Subtract the second number from the first: a - b",
            CalcOp::Add => "Add two numbers: a + b",
            CalcOp::Sqrt => "Square root of a non-negative number",
        }
    }
}

impl fmt::Display for CalcOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CalcOp {
    type Err = CalcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "multiply" | "mul" | "times" => Ok(CalcOp::Multiply),
            "divide" | "div" => Ok(CalcOp::Divide),
            "minus" | "subtract" | "sub" => Ok(CalcOp::Minus),
            "add" | "plus" | "sum" => Ok(CalcOp::Add),
            "sqrt" | "squareroot" | "square_root" => Ok(CalcOp::Sqrt),
            _ => Err(CalcError::UnknownTool(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalcError {
    #[error("division by zero")]
    DivideByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("{op} takes {expected} argument(s), got {got}")]
    ArityError {
        op: CalcOp,
        expected: usize,
        got: usize,
    },
    #[error("number out of range")]
    OutOfRange,
    #[error("unknown tool {0:?}")]
    UnknownTool(String),
}

fn to_decimal(v: f64) -> Result<Decimal, CalcError> {
    if !v.is_finite() {
        return Err(CalcError::OutOfRange);
    }
    Decimal::from_str(&format!("{v}")).map_err(|_| CalcError::OutOfRange)
}

fn round(d: Decimal) -> Decimal {
    d.round_dp_with_strategy(CALC_DECIMALS, RoundingStrategy::MidpointAwayFromZero)
        .normalize()
}

/// `sqrt(y)` rounded half away from zero to four decimals, decided exactly:
/// with `Y = y * 10^8` and `k = floor(sqrt(Y))`, the answer is `k` or `k + 1`
/// (scaled by 10^-4) depending on whether `4Y < (2k + 1)^2`.
fn sqrt4(y: Decimal) -> Result<Decimal, CalcError> {
    let scaled = y
        .checked_mul(Decimal::from(100_000_000u64))
        .ok_or(CalcError::OutOfRange)?;
    let approx = scaled.to_f64().ok_or(CalcError::OutOfRange)?.sqrt().floor();
    let mut k = i128::from_f64(approx).ok_or(CalcError::OutOfRange)?;
    let sq = |k: i128| -> Result<Decimal, CalcError> {
        let v = k.checked_mul(k).ok_or(CalcError::OutOfRange)?;
        Decimal::from_i128(v).ok_or(CalcError::OutOfRange)
    };
    while k > 0 && sq(k)? > scaled {
        k -= 1;
    }
    while sq(k + 1)? <= scaled {
        k += 1;
    }
    let four_y = scaled
        .checked_mul(Decimal::from(4))
        .ok_or(CalcError::OutOfRange)?;
    let odd = 2 * k + 1;
    let rounded = if four_y < sq(odd)? { k } else { k + 1 };
    let mut d = Decimal::from_i128(rounded).ok_or(CalcError::OutOfRange)?;
    d.set_scale(CALC_DECIMALS).map_err(|_| CalcError::OutOfRange)?;
    Ok(d.normalize())
}

/// Exact evaluation rounded half away from zero to four decimals.
pub fn calc_decimal(op: CalcOp, args: &[f64]) -> Result<Decimal, CalcError> {
    if args.len() != op.arity() {
        return Err(CalcError::ArityError {
            op,
            expected: op.arity(),
            got: args.len(),
        });
    }
    let a = to_decimal(args[0])?;
    let b = match args.get(1) {
        Some(v) => to_decimal(*v)?,
        None => Decimal::ZERO,
    };
    let exact = match op {
        CalcOp::Multiply => a.checked_mul(b).ok_or(CalcError::OutOfRange)?,
        CalcOp::Divide => {
            if b.is_zero() {
                return Err(CalcError::DivideByZero);
            }
            a.checked_div(b).ok_or(CalcError::OutOfRange)?
        }
        CalcOp::Minus => a.checked_sub(b).ok_or(CalcError::OutOfRange)?,
        CalcOp::Add => a.checked_add(b).ok_or(CalcError::OutOfRange)?,
        CalcOp::Sqrt => {
            if a.is_sign_negative() && !a.is_zero() {
                return Err(CalcError::NegativeSqrt);
            }
            return sqrt4(a);
        }
    };
    Ok(round(exact))
}

pub fn calc_tool(op: CalcOp, args: &[f64]) -> Result<f64, CalcError> {
    calc_decimal(op, args)?.to_f64().ok_or(CalcError::OutOfRange)
}

/// Result text as returned to the model.
pub fn calc_text(op: CalcOp, args: &[f64]) -> Result<String, CalcError> {
    calc_decimal(op, args).map(|d| d.to_string())
}

/// Decimal square root at full precision, for callers that want more than
/// four decimals.
pub fn sqrt_full(v: f64) -> Option<f64> {
    to_decimal(v).ok()?.sqrt()?.to_f64()
}
