mod common;

use bcod::equivalence::{random_script, to_bi_form};
use bcod::format::{parse_matrix, serialize_matrix};
use bcod::structure::{complete_columns, remove_middle_columns, strip_to_partial};
use bcod::{apply, canonical_bcod, canonicalize, invert, verify_bcod, verify_cod, CodMatrix, Entry, EquivOp, OpScript};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn entry() -> impl Strategy<Value = Entry> {
    prop_oneof![Just(Entry::Zero), (1u32..6, any::<bool>(), any::<bool>()).prop_map(|(v, n, c)| Entry::term(v, n, c))]
}

fn grid() -> impl Strategy<Value = CodMatrix> {
    (1usize..6, 1usize..6)
        .prop_flat_map(|(p, n)| prop::collection::vec(prop::collection::vec(entry(), n), p))
        .prop_filter_map("needs a variable", |rows| CodMatrix::renumbered(rows).ok().map(|(g, _)| g))
}

fn fixture() -> impl Strategy<Value = CodMatrix> {
    prop_oneof![Just(four()), Just(eight()), Just(sixteen()), Just(g1()), Just(g2())]
}

fn script_for(g: &CodMatrix, seed: u64, len: usize) -> OpScript {
    random_script(&mut ChaCha8Rng::seed_from_u64(seed), g.p(), g.n(), g.k(), len)
}

/// Only operations that keep a BCOD balanced and its column pairs intact.
fn balanced_script(g: &CodMatrix, seed: u64, len: usize) -> OpScript {
    let s = script_for(g, seed, 3 * len);
    let ops: Vec<EquivOp> = s
        .into_iter()
        .filter(|op| !matches!(op, EquivOp::ColNeg(_) | EquivOp::ColPerm(_) | EquivOp::InstConj(_)))
        .take(len)
        .collect();
    OpScript::from(ops)
}

fn without_colneg(s: OpScript) -> OpScript {
    OpScript::from(s.into_iter().filter(|op| !matches!(op, EquivOp::ColNeg(_))).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trip(g in grid()) {
        let text = serialize_matrix(&g);
        prop_assert_eq!(parse_matrix(&text).unwrap(), g);
        prop_assert!(!text.contains("  ") && !text.contains(" \n"));
    }

    #[test]
    fn apply_is_an_action(g in fixture(), a in any::<u64>(), b in any::<u64>()) {
        let s1 = script_for(&g, a, 6);
        let s2 = script_for(&g, b, 6);
        let joined = s1.clone().concat(&s2);
        prop_assert_eq!(apply(&g, &joined).unwrap(), apply(&apply(&g, &s1).unwrap(), &s2).unwrap());
    }

    #[test]
    fn invert_undoes(g in fixture(), seed in any::<u64>()) {
        let s = script_for(&g, seed, 10);
        prop_assert_eq!(apply(&apply(&g, &s).unwrap(), &invert(&s)).unwrap(), g);
    }

    #[test]
    fn mutations_are_detected(g in fixture(), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let h = apply(&g, &script_for(&g, seed, 8)).unwrap();
        let all = mutations(&h);
        let (r, c, e) = all[pick.index(all.len())];
        prop_assert!(!verify_cod(&with_cell(&h, r, c, e)).passed());
    }

    #[test]
    fn balanced_scrambles_stay_bcods(m in 1usize..=5, seed in any::<u64>()) {
        let c = canonical_bcod(m).unwrap();
        let h = apply(&c, &balanced_script(&c, seed, 10)).unwrap();
        prop_assert!(verify_bcod(&h).passed());
    }

    #[test]
    fn canonicalize_recovers(m in 1usize..=5, seed in any::<u64>()) {
        let c = canonical_bcod(m).unwrap();
        let g = apply(&c, &without_colneg(script_for(&c, seed, 12))).unwrap();
        let cert = canonicalize(&g).unwrap();
        prop_assert_eq!(apply(&g, &cert.script).unwrap(), c);
        prop_assert!(cert.script.iter().all(|op| !matches!(op, EquivOp::ColNeg(_))));
        prop_assert!(cert.recursive_phase().iter().all(|op| !op.is_column_op()));
    }

    #[test]
    fn two_components_after_removal(m in 2usize..=5, seed in any::<u64>(), var in any::<prop::sample::Index>()) {
        let c = canonical_bcod(m).unwrap();
        let g = apply(&c, &balanced_script(&c, seed, 10)).unwrap();
        let v = var.index(g.k() as usize) as u32 + 1;
        let (h, _, _) = to_bi_form(&g, v, true).unwrap();
        let (reduced, parts) = remove_middle_columns(&h).unwrap();
        prop_assert_eq!(parts.len(), 2);
        prop_assert!(verify_bcod(&reduced).passed());
        for i in 0..2 {
            let half = parts.extract(&reduced, i).unwrap();
            prop_assert_eq!((half.p(), half.k()), (1 << (m - 1), 1 << (m - 2)));
        }
    }

    #[test]
    fn completion_inverts_stripping(m in 1usize..=5, seed in any::<u64>(), var in any::<prop::sample::Index>()) {
        let c = canonical_bcod(m).unwrap();
        let g = apply(&c, &balanced_script(&c, seed, 10)).unwrap();
        let v = var.index(g.k() as usize) as u32 + 1;
        let (h, _, _) = to_bi_form(&g, v, true).unwrap();
        // Swap z_v and z_1 so the block is a B_1 block.
        let mut rename: Vec<u32> = (1..=g.k()).collect();
        rename.swap(0, v as usize - 1);
        let b1 = apply(&h, &OpScript::from(vec![EquivOp::Rename(rename)])).unwrap();
        prop_assert_eq!(complete_columns(&strip_to_partial(&b1).unwrap()).unwrap(), b1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn equivalence_preserves_cods(g in fixture(), seed in any::<u64>()) {
        prop_assert!(verify_cod(&apply(&g, &script_for(&g, seed, 10)).unwrap()).passed());
    }
}
