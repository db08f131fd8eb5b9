use std::collections::BTreeMap;

use matricial::analytic::master_cauchy;
use matricial::fock::FockModel;
use matricial::matricial::{assemble_matricial_r, invert_c, r_from_unit_inverse};
use matricial::moments::{moments_from_cumulants, smf_moments};
use matricial::partitions::{block_labels, NCPartition};
use matricial::scalar::ratio;
use matricial::series::{moments_from_r, mult_inverse_c, r_from_inverse, r_from_moments};
use matricial::{Cell, Coeff, DistributionArray, Shape, TruncatedSeries};
use num::rational::BigRational;
use proptest::prelude::*;

type Q = BigRational;

fn rationals(len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), len)
        .prop_map(|v| v.into_iter().map(|(p, q)| ratio(p, q)).collect())
}

fn shapes() -> impl Strategy<Value = Shape> {
    (1u8..16).prop_map(|mask| {
        let cells: Vec<Cell> = Cell::ALL
            .into_iter()
            .filter(|c| mask >> c.index() & 1 == 1)
            .collect();
        Shape::new(&cells).unwrap()
    })
}

fn arrays(len: usize) -> impl Strategy<Value = DistributionArray<Q>> {
    (shapes(), prop::collection::vec(rationals(len), 4)).prop_map(|(shape, laws)| {
        let map: BTreeMap<_, _> = shape
            .cells()
            .map(|c| (c, laws[c.index()].clone()))
            .collect();
        DistributionArray::new(shape, map).unwrap()
    })
}

fn nc_partitions() -> impl Strategy<Value = NCPartition> {
    (1usize..=7).prop_flat_map(|m| {
        let all = matricial::partitions::enumerate_nc(m).unwrap();
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn c_times_b_is_one(r in rationals(6)) {
        let r = TruncatedSeries::new(r);
        let b = mult_inverse_c(&r, 6).unwrap();
        // z C(z) = 1 + z R(z), so (B/z)(1 + zR) = 1
        let zc = TruncatedSeries::one(6).add(&r.shift_up().truncate(6).unwrap());
        prop_assert_eq!(b.mul(&zc), TruncatedSeries::one(6));
        prop_assert_eq!(r_from_inverse(&b).unwrap(), r.truncate(5).unwrap());
    }

    #[test]
    fn cumulants_round_trip_through_moments(r in rationals(7)) {
        let m = moments_from_cumulants(&r, 7).unwrap();
        prop_assert_eq!(&m, &moments_from_r(&TruncatedSeries::new(r.clone()), 7).unwrap());
        prop_assert_eq!(r_from_moments(&m).unwrap(), TruncatedSeries::new(r));
    }

    #[test]
    fn unit_inverse_round_trips(array in arrays(5)) {
        let r = assemble_matricial_r(&array, 4);
        let b = invert_c(&r, 5).unwrap();
        prop_assert_eq!(r_from_unit_inverse(&b).unwrap(), r);
    }

    #[test]
    fn labels_ignore_block_listing_order(p in nc_partitions(), seed in any::<u64>()) {
        let k = p.n_blocks();
        let coloring: Vec<u8> = (0..k).map(|b| 1 + (seed >> b & 1) as u8).collect();
        let labels = block_labels(&p, &coloring).unwrap();
        // relist blocks in reverse; labels must follow the blocks, not the order
        let mut blocks = p.blocks();
        blocks.reverse();
        let q = NCPartition::from_blocks(&blocks).unwrap();
        let relabel: Vec<u8> = q.blocks().iter().map(|b| coloring[p.assignment()[b[0] - 1] as usize]).collect();
        let q_labels = block_labels(&q, &relabel).unwrap();
        for (i, b) in q.blocks().iter().enumerate() {
            prop_assert_eq!(q_labels[i], labels[p.assignment()[b[0] - 1] as usize]);
        }
    }

    #[test]
    fn engines_agree(array in arrays(5), alpha in (1i64..=3, 1i64..=2)) {
        let p = smf_moments(&array, 6).unwrap();
        let f = FockModel::build(&array, 6, ratio(alpha.0, alpha.1)).unwrap().moments(6).unwrap();
        let a = master_cauchy(&array, 6).unwrap();
        prop_assert_eq!(&p, &f);
        prop_assert_eq!(&p, &a);
    }

    #[test]
    fn float_tracks_rational(array in arrays(5)) {
        let exact = smf_moments(&array, 6).unwrap();
        let map = array.cumulants().iter().map(|(c, v)| (*c, v.iter().map(Coeff::to_f64).collect())).collect();
        let floats = DistributionArray::<f64>::new(array.shape(), map).unwrap();
        let approx = master_cauchy(&floats, 6).unwrap();
        prop_assert!(exact.map(Coeff::to_f64).close_to(&approx, 1e-9));
    }
}
