use crate::error::{Error, Result};
use crate::scalar::Real;

/// Skorokhod reflection at 0: `z_t = f_t - min(0, min_{s<=t} f_s)`.
pub fn skorokhod_reflect<T: Real>(f: &[T]) -> Result<Vec<T>> {
    match f.first() {
        None => return Ok(Vec::new()),
        Some(&f0) if f0 < T::zero() => {
            return Err(Error::Contract(format!(
                "reflection needs f_0 >= 0, got {f0}"
            )))
        }
        _ => {}
    }
    let mut m = T::zero();
    Ok(f.iter()
        .map(|&v| {
            m = m.min(v);
            v - m
        })
        .collect())
}
