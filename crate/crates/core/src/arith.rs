//! Elementary number theory used by the residue schemes.

use num_integer::Integer;

/// Primes `p ≤ bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Prime factorisation by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// No prime divides `n` three or more times.
pub fn is_cubefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e <= 2)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// `Σ_{bound < p ≤ limit} 1/p²` over primes.
pub fn prime_inverse_square_tail(bound: u64, limit: u64) -> f64 {
    primes_up_to(limit)
        .into_iter()
        .filter(|&p| p > bound)
        .map(|p| 1.0 / (p as f64 * p as f64))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(317).len(), 66);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn cubefree_by_trial_division() {
        assert!(is_cubefree(9));
        assert!(is_cubefree(4));
        assert!(!is_cubefree(8));
        assert!(!is_cubefree(54));
        assert!(is_cubefree(1));
        assert!(is_squarefree(30) && !is_squarefree(12));
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(-3, 7), Some(2));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
