//! Constructors for the motivating measure families.

mod examples;
mod graph;
mod tree;
mod urn;

pub use examples::{
    example1, example1_as_printed, example2, five_point, from_table, stoch_table, EXAMPLE1_CNA_RANGE_END,
};
pub use graph::{
    component_count, exclusion_measure, forest_measure, random_cluster_measure, spanning_tree_measure, GraphSpec,
    MAX_EXCLUSION_VERTICES, MAX_GRAPH_EDGES,
};
pub use tree::{tree_class_measure, MeasureTree, TreeBuild};
pub use urn::urn_measure;

use crate::error::{Error, Result};
use crate::measure::BinaryMeasure;
use crate::seq::binomial_row;
use crate::weight::Weight;

/// Exchangeable measure with rank sequence `a` (`a_k / C(n,k)` per atom).
pub fn exchangeable_measure<W: Weight>(a: &[W]) -> Result<BinaryMeasure<W>> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty rank sequence".into()));
    }
    let n = a.len() - 1;
    if a.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidArgument("negative rank probability".into()));
    }
    let total = a.iter().fold(W::zero(), |s, x| s.add(x));
    if !total.cmp_weak(&W::one()).is_eq() {
        return Err(Error::InvalidArgument(format!("rank sequence sums to {}, not 1", total.render())));
    }
    crate::error::check_rank(n, crate::measure::MAX_MEASURE_RANK, "measures")?;
    let b = binomial_row(n);
    let per: Vec<W> = a.iter().zip(&b).map(|(x, &c)| x.div(&W::from_ratio(c as i64, 1))).collect();
    BinaryMeasure::from_probs(n, (0..1usize << n).map(|x| per[x.count_ones() as usize].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn exchangeable_examples() {
        let m = exchangeable_measure(&[ratio(1, 4), ratio(1, 2), ratio(1, 4)]).unwrap();
        assert_eq!(m, RationalMeasure::uniform(2).unwrap());
        let m = exchangeable_measure(&[ratio(0, 1), ratio(1, 1), ratio(0, 1)]).unwrap();
        assert_eq!(m.probs(), &[ratio(0, 1), ratio(1, 2), ratio(1, 2), ratio(0, 1)]);
        assert!(exchangeable_measure(&[ratio(1, 2), ratio(1, 4)]).is_err());
    }
}
