use blocklogic::chain::{complete, Model};
use blocklogic::propositional::{TheorySet, Valuation};
use blocklogic::syntax::{Atom, BcFormula, Block, ClassicalFormula};
use proptest::prelude::*;

pub fn classical() -> impl Strategy<Value = ClassicalFormula> {
    let leaf = prop_oneof![
        1 => Just(ClassicalFormula::Falsum),
        6 => (0..4u64).prop_map(ClassicalFormula::atom),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ClassicalFormula::implies(a, b)),
            inner.clone().prop_map(ClassicalFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ClassicalFormula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| ClassicalFormula::or(a, b)),
        ]
    })
}

pub fn block() -> impl Strategy<Value = Block> {
    (1..=4u64, classical()).prop_map(|(i, a)| Block::new(i, a).unwrap())
}

pub fn formula() -> impl Strategy<Value = BcFormula> {
    let leaf = prop_oneof![
        1 => Just(BcFormula::Falsum),
        3 => (0..4u64).prop_map(BcFormula::p),
        3 => (1..=4u64).prop_map(BcFormula::q),
        3 => classical().prop_map(BcFormula::boxed),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| BcFormula::implies(a, b)),
            1 => inner.clone().prop_map(BcFormula::not),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| BcFormula::and(a, b)),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| BcFormula::iff(a, b)),
            2 => (block(), inner).prop_map(|(b, f)| BcFormula::update(b, f)),
        ]
    })
}

pub fn modal() -> impl Strategy<Value = BcFormula> {
    formula().prop_filter("update-free", |f| f.is_update_free())
}

pub fn valuation() -> impl Strategy<Value = Valuation> {
    prop::collection::btree_set(0..4u64, 0..=4).prop_map(|s| s.into_iter().map(Atom).collect())
}

/// A satisfiable background and a chain consistent with it.
pub fn background_and_chain() -> impl Strategy<Value = (TheorySet, Vec<ClassicalFormula>)> {
    (prop::collection::vec(classical(), 0..=2), prop::collection::vec(classical(), 0..=3))
        .prop_filter_map("inconsistent", |(bg, chain)| {
            let background: TheorySet = bg.into_iter().collect();
            let mut all: Vec<&ClassicalFormula> = background.iter().collect();
            all.extend(&chain);
            super::naive_sat(&all).then_some((background, chain))
        })
}

pub fn pending() -> impl Strategy<Value = Vec<Block>> {
    prop::collection::vec((1..=7u64, classical()).prop_map(|(i, a)| Block::new(i, a).unwrap()), 0..=5)
}

pub fn initial_model() -> impl Strategy<Value = Model> {
    (background_and_chain(), valuation())
        .prop_map(|((bg, chain), v)| blocklogic::chain::initial_model(bg, chain, v).unwrap())
}

/// Any model, obtained by completing a random pending list.
pub fn model() -> impl Strategy<Value = Model> {
    (background_and_chain(), pending(), valuation()).prop_map(|((bg, chain), pu, v)| {
        let done = complete(&bg, &chain, &pu).unwrap();
        Model::new(bg, done.chain, done.pending, v).unwrap()
    })
}
