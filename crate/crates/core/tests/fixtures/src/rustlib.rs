// SPDX-License-Identifier: Apache-2.0

pub fn sum(a: i32, b: i32) -> i32 {
    a.wrapping_add(b)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn count_even(xs: &[u32]) -> usize {
    let mut n = 0;
    for &x in xs {
        if x % 2 == 0 {
            n += 1;
        }
    }
    n
}

pub fn classify(x: i64) -> &'static str {
    match x {
        i64::MIN..=-1 => "negative",
        0 => "zero",
        1..=9 => "small",
        _ => "large",
    }
}

pub fn checked(a: u32, b: u32) -> Option<u32> {
    a.checked_mul(b)?.checked_add(1)
}
