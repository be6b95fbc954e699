//! Exact Bernoulli, Euler and Genocchi numbers and polynomials, ordinary and
//! higher order, with closed-form Caputo derivatives of the polynomials.
//!
//! Each family is defined by the exponential generating function of its
//! numbers, and order `l` raises it to the `l`-th power:
//!
//! ```text
//! Bernoulli   (z/(e^z - 1))^l  e^{tz}
//! Euler       (2/(e^z + 1))^l  e^{tz}     (so E_n = E_n(0), not the secant numbers)
//! Genocchi    (2z/(e^z + 1))^l e^{tz}     (G_0 = 0)
//! ```

mod closed_form;
mod numbers;
mod poly;

pub use closed_form::{caputo_closed_form, closed_form_integer, power_rule_oracle};
pub use numbers::{higher_order_multinomial, numbers, Family, RationalSeq, MAX_INDEX};
pub use poly::{polynomial, PolyRational};

pub use num_rational::BigRational as Rational;
