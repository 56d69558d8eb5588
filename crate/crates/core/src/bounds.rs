//! Closed-form lower and upper bounds on the minimal dispersion
//! `disp*(n, d)` and on the rate constant `c_d = liminf n disp*(n, d)`.
//!
//! Lower bounds: the trivial `1/(n+1)`, the Dumitrescu-Jiang bound
//! `5/(4(n+5))`, and the main bound `log2(d) / (4 (n + log2 d))`.
//!
//! Upper bounds grow super-exponentially in `d` and are carried in log2
//! form: the Rote-Tichy prime-product bound
//! `(2^(d-1) prod p_i) / n` and the Larcher bound `2^(7d+1) / n`, which
//! overtakes the former from `d = 54` on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three lower bounds for a given `(n, d)` and their maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBounds {
    /// `1 / (n + 1)`.
    pub trivial: f64,
    /// `5 / (4 (n + 5))`.
    pub dj: f64,
    /// `log2(d) / (4 (n + log2 d))`.
    pub main: f64,
    pub best: f64,
}

/// The two upper bounds in log2 form and their minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBounds {
    /// `log2` of `(2^(d-1) prod_{i<d} p_i) / n`.
    pub rote_tichy_log2: f64,
    /// `log2` of `2^(7d+1) / n`, i.e. `7d + 1 - log2 n`.
    pub larcher_log2: f64,
    pub best_log2: f64,
}

/// Proven enclosure of the rate constant `c_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdBounds {
    /// `max(5/4, log2(d) / 4)`.
    pub lower: f64,
    /// `7d + 1`.
    pub upper_log2: f64,
}

/// Everything evaluated for one `(n, d)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u64,
    pub d: u32,
    pub lower_trivial: f64,
    pub lower_dj: f64,
    pub lower_main: f64,
    pub lower_best: f64,
    pub upper_rote_tichy_log2: f64,
    pub upper_larcher_log2: f64,
    pub upper_best_log2: f64,
    /// `2^upper_best_log2` when it fits in an `f64`.
    pub upper_best: Option<f64>,
    pub c_d_lower: f64,
    pub c_d_upper_log2: f64,
}

fn check_n_d(n: u64, d: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(
            "dispersion bounds need d >= 2; d = 1 reduces to exact gaps".into(),
        ));
    }
    Ok(())
}

/// The three lower bounds on `disp*(n, d)`.
pub fn lower_bounds(n: u64, d: u32) -> Result<LowerBounds> {
    check_n_d(n, d)?;
    let nf = n as f64;
    let trivial = 1.0 / (nf + 1.0);
    let dj = 5.0 / (4.0 * (nf + 5.0));
    let l2 = (d as f64).log2();
    let main = l2 / (4.0 * (nf + l2));
    Ok(LowerBounds {
        trivial,
        dj,
        main,
        best: trivial.max(dj).max(main),
    })
}

/// The first `count` primes, via a sieve sized from the upper bound
/// `p_k < k (ln k + ln ln k)` for `k >= 6`.
pub(crate) fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return vec![];
    }
    let limit = if count < 6 {
        14usize
    } else {
        let k = count as f64;
        (k * (k.ln() + k.ln().ln())).ceil() as usize + 1
    };
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    if limit >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if sieve[i] {
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    let primes: Vec<u64> = (2..=limit)
        .filter(|&x| sieve[x])
        .take(count)
        .map(|x| x as u64)
        .collect();
    assert_eq!(
        primes.len(),
        count,
        "sieve bound too small for {count} primes"
    );
    primes
}

/// The two upper bounds on `disp*(n, d)` in log2 form.
pub fn upper_bounds(n: u64, d: u32) -> Result<UpperBounds> {
    check_n_d(n, d)?;
    let log2_n = (n as f64).log2();
    let prime_log_sum: f64 = first_primes(d as usize - 1)
        .iter()
        .map(|&p| (p as f64).log2())
        .sum();
    let rote_tichy_log2 = (d as f64 - 1.0) + prime_log_sum - log2_n;
    let larcher_log2 = (7.0 * d as f64 + 1.0) - log2_n;
    Ok(UpperBounds {
        rote_tichy_log2,
        larcher_log2,
        best_log2: rote_tichy_log2.min(larcher_log2),
    })
}

/// Lower bound on `N(eps, d)`, the fewest points forcing dispersion at most
/// `eps`: `(4 eps)^-1 (1 - 4 eps) log2 d`, valid for `eps` in `(0, 1/4)`.
pub fn min_points_lower_bound(eps: f64, d: u32) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} outside (0, 1/4)"
        )));
    }
    if d < 1 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    Ok((1.0 - 4.0 * eps) / (4.0 * eps) * (d as f64).log2())
}

/// Proven enclosure of `c_d`: `[max(5/4, log2(d)/4), 2^(7d+1)]`.
pub fn c_d_bounds(d: u32) -> Result<CdBounds> {
    if d < 2 {
        return Err(Error::InvalidParameter("c_d bounds need d >= 2".into()));
    }
    let lower = (5.0f64 / 4.0).max((d as f64).log2() / 4.0);
    Ok(CdBounds {
        lower,
        upper_log2: 7.0 * d as f64 + 1.0,
    })
}

/// Evaluates every bound for one `(n, d)`.
pub fn bounds_report(n: u64, d: u32) -> Result<BoundsReport> {
    let lo = lower_bounds(n, d)?;
    let up = upper_bounds(n, d)?;
    let cd = c_d_bounds(d)?;
    let upper_best = if up.best_log2 <= 1023.0 {
        Some(up.best_log2.exp2())
    } else {
        None
    };
    Ok(BoundsReport {
        n,
        d,
        lower_trivial: lo.trivial,
        lower_dj: lo.dj,
        lower_main: lo.main,
        lower_best: lo.best,
        upper_rote_tichy_log2: up.rote_tichy_log2,
        upper_larcher_log2: up.larcher_log2,
        upper_best_log2: up.best_log2,
        upper_best,
        c_d_lower: cd.lower,
        c_d_upper_log2: cd.upper_log2,
    })
}
