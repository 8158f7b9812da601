use crate::{Error, Result};

/// Permutations of `0..4` in lexicographic order with their signs.
fn permutations() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    out
}

fn check(v: &[f64]) -> Result<()> {
    if v.len() != 4 {
        return Err(Error::DimensionNot4(v.len()));
    }
    Ok(())
}

/// The 24-vector `sign(σ) a[σ0] b[σ1]` over permutations `σ`.
pub fn lift_left(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check(a)?;
    check(b)?;
    Ok(permutations().into_iter().map(|(p, s)| s * a[p[0]] * b[p[1]]).collect())
}

/// The 24-vector `c[σ2] d[σ3]` over permutations `σ`.
pub fn lift_right(c: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    check(c)?;
    check(d)?;
    Ok(permutations().into_iter().map(|(p, _)| c[p[2]] * d[p[3]]).collect())
}

/// Vectors `u`, `v` in `R^24` with `<u, v> = det[a b c d]`.
pub fn hopcroft_lift(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok((lift_left(a, b)?, lift_right(c, d)?))
}
