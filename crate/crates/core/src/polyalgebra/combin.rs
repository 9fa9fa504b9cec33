//! Small exact combinatorics helpers shared by the polynomial machinery.

/// Binomial coefficient C(n, k) computed exactly in integer arithmetic.
/// Safe for the degree ranges this crate supports (n ≤ ~120).
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// C(n, k) as f64 (rounded when the exact value exceeds 2^53).
pub fn binomial_f64(n: u32, k: u32) -> f64 {
    binomial(n, k) as f64
}

/// Falling factorial e·(e−1)···(e−g+1) = e!/(e−g)!, the coefficient picked up
/// by differentiating x^e g times. Zero when g > e.
pub fn falling_factorial(e: u32, g: u32) -> f64 {
    if g > e {
        return 0.0;
    }
    let mut acc: u128 = 1;
    for i in 0..g {
        acc *= (e - i) as u128;
    }
    acc as f64
}

/// n! as f64 via u128 (exact for n ≤ 33).
pub fn factorial(n: u32) -> f64 {
    let mut acc: u128 = 1;
    for i in 2..=n as u128 {
        acc *= i;
    }
    acc as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(64, 32), 1832624140942590534);
        assert_eq!(binomial(5, 6), 0);
    }

    #[test]
    fn falling_factorial_values() {
        assert_eq!(falling_factorial(4, 0), 1.0);
        assert_eq!(falling_factorial(4, 2), 12.0);
        assert_eq!(falling_factorial(4, 4), 24.0);
        assert_eq!(falling_factorial(3, 4), 0.0);
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
    }
}
