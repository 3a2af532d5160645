//! Exhaustive enumeration of partition universes in lexicographic restricted
//! growth order.

use crate::error::{Error, Result};
use crate::model::ResolvedModel;
use crate::partition::Partition;

/// Iterator over every restricted growth string of length `n`, smallest
/// first: the 1-partition `[0, 0, ..., 0]` opens the stream and the
/// N-partition `[0, 1, ..., n-1]` closes it.
pub struct RgsIterator {
    assignment: Vec<usize>,
    /// prefix_max[i] = max(assignment[0..=i]).
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl RgsIterator {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(RgsIterator {
            assignment: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: false,
        })
    }

    fn advance(&mut self) -> bool {
        let n = self.assignment.len();
        // Rightmost position whose digit can still grow: digit i may take any
        // value up to prefix_max[i-1] + 1.
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.assignment[i] <= self.prefix_max[i - 1] {
                self.assignment[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.assignment[i]);
                for j in i + 1..n {
                    self.assignment[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for RgsIterator {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(
            Partition::from_assignment(self.assignment.clone())
                .expect("iterator maintains restricted growth form"),
        )
    }
}

/// Streams every member of the model's universe exactly once, in
/// lexicographic restricted growth order. `limit` caps `n`; full enumeration
/// above it is refused.
pub fn enumerate_model(
    model: &ResolvedModel,
    n: usize,
    limit: usize,
) -> Result<impl Iterator<Item = Partition> + '_> {
    if n > limit {
        return Err(Error::EnumerationLimitExceeded { n, limit });
    }
    model.validate(n)?;
    let model = model.clone();
    Ok(RgsIterator::new(n)?.filter(move |p| model.contains(p)))
}

/// Number of partitions the stream would yield, computed exactly without
/// enumerating.
pub fn count_model(model: &ResolvedModel, n: usize) -> Result<crate::combinatorics::BigCount> {
    model.universe_size(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::bell;
    use crate::partition::PartitionShape;
    use num_traits::ToPrimitive;

    #[test]
    fn all_of_three_matches_the_five_partition_universe() {
        let got: Vec<Vec<usize>> = enumerate_model(&ResolvedModel::All, 3, 12)
            .unwrap()
            .map(|p| p.assignment().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2],
            ]
        );
    }

    #[test]
    fn perm_shape_two_one_has_three_members() {
        let shape = PartitionShape::from_sizes(vec![2, 1]).unwrap();
        let got: Vec<Partition> = enumerate_model(&ResolvedModel::Perm(shape), 3, 12)
            .unwrap()
            .collect();
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|p| p.shape().sizes() == [2, 1]));
    }

    #[test]
    fn num_three_blocks_of_three_is_the_singleton_partition() {
        let got: Vec<Partition> = enumerate_model(&ResolvedModel::Num(3), 3, 12)
            .unwrap()
            .collect();
        assert_eq!(got.len(), 1);
        assert!(got[0].is_singleton_partition());
    }

    #[test]
    fn counts_match_closed_forms_up_to_ten() {
        for n in 1..=10usize {
            let full: usize = enumerate_model(&ResolvedModel::All, n, 12).unwrap().count();
            assert_eq!(full, bell(n).unwrap().to_usize().unwrap(), "all, n={n}");
            for k in 1..=n {
                let model = ResolvedModel::Num(k);
                let got = enumerate_model(&model, n, 12).unwrap().count();
                let want = model.universe_size(n).unwrap().to_usize().unwrap();
                assert_eq!(got, want, "num k={k}, n={n}");
            }
            if n >= 3 {
                let got = enumerate_model(&ResolvedModel::Interior, n, 12)
                    .unwrap()
                    .count();
                assert_eq!(
                    got,
                    bell(n).unwrap().to_usize().unwrap() - 2,
                    "interior n={n}"
                );
            }
        }
    }

    #[test]
    fn perm_counts_match_closed_form_up_to_ten() {
        use crate::combinatorics::{count_with_shape, enumerate_shapes};
        for n in 1..=10usize {
            for shape in enumerate_shapes(n).unwrap() {
                let model = ResolvedModel::Perm(shape.clone());
                let got = enumerate_model(&model, n, 12).unwrap().count();
                assert_eq!(
                    got,
                    count_with_shape(&shape).to_usize().unwrap(),
                    "shape {shape}, n={n}"
                );
            }
        }
    }

    #[test]
    fn interior_rejected_below_three() {
        assert_eq!(
            enumerate_model(&ResolvedModel::Interior, 2, 12)
                .err()
                .unwrap(),
            Error::EmptyInterior { n: 2 }
        );
    }

    #[test]
    fn limit_enforced() {
        assert_eq!(
            enumerate_model(&ResolvedModel::All, 13, 12).err().unwrap(),
            Error::EnumerationLimitExceeded { n: 13, limit: 12 }
        );
    }

    #[test]
    fn stream_is_strictly_increasing() {
        let mut prev: Option<Vec<usize>> = None;
        for p in enumerate_model(&ResolvedModel::All, 6, 12).unwrap() {
            let cur = p.assignment().to_vec();
            if let Some(prev) = &prev {
                assert!(prev < &cur);
            }
            prev = Some(cur);
        }
    }
}
