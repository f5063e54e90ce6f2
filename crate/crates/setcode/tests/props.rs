//! Property tests for the structural invariants: bijections, orderings,
//! ball containment and coset independence.

use num_bigint::BigUint;
use proptest::prelude::*;

use setcode::algebra::bch_with_total_len;
use setcode::arith::{binomial, rank_combination, unrank_combination};
use setcode::bits::Bits;
use setcode::channel::{self, ChannelSpec, Eps, ErrorKind};
use setcode::delhash::DeletionHash;
use setcode::seq::{
    char_vector, seq_rank, seq_unrank, set_from_char_vector, set_from_text, set_to_text,
    sort_set, subset_rank, subset_unrank, OrderingConvention, Sequence, SequenceSet,
};

fn tiny_set() -> impl Strategy<Value = SequenceSet> {
    // q in {2,3}, L in 1..=3, M in 1..=3 distinct sequences
    (2u32..=3, 1usize..=3).prop_flat_map(|(q, l)| {
        let space = (q as u64).pow(l as u32);
        proptest::collection::btree_set(0..space, 1..=3usize.min(space as usize)).prop_map(
            move |ranks| {
                let elems: Vec<Sequence> =
                    ranks.into_iter().map(|r| seq_unrank(q, l, r as u128)).collect();
                SequenceSet::codeword(q, l, elems).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn seq_rank_is_a_bijection(q in 2u32..=5, l in 1usize..=4, pick in 0u64..10_000) {
        let space = (q as u64).pow(l as u32);
        let r = (pick % space) as u128;
        let x = seq_unrank(q, l, r);
        prop_assert_eq!(seq_rank(&x), r);
        prop_assert_eq!(x.len(), l);
    }

    #[test]
    fn char_vector_round_trips(set in tiny_set()) {
        let cv = char_vector(&set).unwrap();
        prop_assert_eq!(cv.weight(), set.len());
        let back = set_from_char_vector(set.q(), set.uniform_len().unwrap(), &cv).unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn sorting_is_monotone_permutation(set in tiny_set()) {
        let desc = sort_set(&set, OrderingConvention::descending());
        prop_assert_eq!(desc.len(), set.len());
        for x in &desc {
            prop_assert!(set.contains(x));
        }
        for w in desc.windows(2) {
            prop_assert!(seq_rank(&w[0]) > seq_rank(&w[1]));
        }
        let asc = sort_set(&set, OrderingConvention::ascending());
        let mut rev = asc.clone();
        rev.reverse();
        prop_assert_eq!(rev, desc);
    }

    #[test]
    fn subset_rank_unrank_bijection(set in tiny_set()) {
        let rank = subset_rank(&set).unwrap();
        let back = subset_unrank(&rank, set.q(), set.uniform_len().unwrap(), set.len()).unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn combination_rank_bijection(n in 1usize..=20, k in 0usize..=6, pick in 0u64..1 << 40) {
        let k = k.min(n);
        let total = binomial(n as u64, k as u64);
        let r = BigUint::from(pick) % &total;
        let combo = unrank_combination(n, k, &r).unwrap();
        prop_assert_eq!(rank_combination(n, &combo), r);
    }

    #[test]
    fn set_file_round_trip_is_byte_identical(set in tiny_set()) {
        let text = set_to_text(&set);
        let back = set_from_text(&text).unwrap();
        prop_assert_eq!(&back, &set);
        prop_assert_eq!(set_to_text(&back), text);
    }

    #[test]
    fn corrupt_lands_in_the_exact_ball(
        set in tiny_set(),
        s in 0usize..=1,
        t in 0usize..=1,
        eps in 0usize..=2,
        kind_pick in 0usize..4,
        seed in 0u64..200,
    ) {
        let kind = [
            ErrorKind::Substitution,
            ErrorKind::Deletion,
            ErrorKind::Edit,
            ErrorKind::LimitedMagnitude { k_plus: 1, k_minus: 1 },
        ][kind_pick];
        let spec = ChannelSpec { s, t, eps: Eps::Bounded(eps), kind };
        prop_assume!(s + t <= set.len());
        let ball = channel::error_ball(&set, &spec, 1 << 22).unwrap();
        let out = channel::corrupt(&set, &spec, seed).unwrap();
        prop_assert!(ball.members.contains(&out));
        // cardinality window
        for member in &ball.members {
            prop_assert!(member.len() + s + t >= set.len());
            prop_assert!(member.len() <= set.len());
        }
        // zero-symbol-error punctures: the center minus any single element
        // is a member whenever a loss is allowed
        if s >= 1 {
            for x in set.iter() {
                prop_assert!(ball.members.contains(&set.replace(x, None)));
            }
        }
    }

    #[test]
    fn vt_hash_length_formula(n in 1usize..=16) {
        // exactly ceil(log2(n+1)) + 1 bits
        let vt = DeletionHash::vt(n);
        let mut ceil_log = 0u32;
        while (1u64 << ceil_log) < n as u64 + 1 {
            ceil_log += 1;
        }
        prop_assert_eq!(vt.h(), ceil_log + 1);
    }

    #[test]
    fn coset_decoding_is_choice_independent(
        msg in 0u64..(1 << 14),
        syn in 0u64..32,
        offset in 0u64..(1 << 14),
        flip in 0usize..19,
    ) {
        // B = [19, 14, 3]: decode(u - y) + y must not depend on which y
        // solves yH^T = s
        let b = bch_with_total_len(19, 1).unwrap();
        let s = Bits::from_uint_be(syn, 5);
        let y1 = b.coset_rep(&s);
        let y2 = y1.xor(&b.codeword(&Bits::from_uint_be(offset, 14)));
        prop_assert_eq!(b.syndrome_bits(&y2), s.clone());
        let u = b.codeword(&Bits::from_uint_be(msg, 14)).xor(&y1);
        let mut bad = u.clone();
        bad.flip(flip);
        let via1 = b.decode(&bad.xor(&y1)).unwrap().xor(&y1);
        let via2 = b.decode(&bad.xor(&y2)).unwrap().xor(&y2);
        prop_assert_eq!(&via1, &via2);
        prop_assert_eq!(via1, u);
    }
}
