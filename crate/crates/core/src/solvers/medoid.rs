use rayon::prelude::*;

use crate::error::{GmError, Result};
use crate::metric::{sum_of_distances, DistanceFn, WeightedSet};
use crate::solvers::{min_by_value_then_index, MedianResult};

/// Set median: the input object with the smallest weighted sum of distances.
pub fn medoid<T>(d: &DistanceFn<T>, set: &WeightedSet<T>) -> Result<MedianResult<T>>
where
    T: Clone + Send + Sync + 'static,
{
    if set.is_empty() {
        return Err(GmError::invalid("medoid of an empty set"));
    }
    let omegas = set
        .objects()
        .par_iter()
        .map(|c| sum_of_distances(d, c, set))
        .collect::<Result<Vec<f64>>>()?;
    let (idx, omega) = omegas
        .into_iter()
        .enumerate()
        .reduce(min_by_value_then_index)
        .expect("non-empty");
    Ok(MedianResult::exact(
        set.objects()[idx].clone(),
        omega,
        set.len(),
        "medoid",
    ))
}
