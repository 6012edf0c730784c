use parabose::{
    enumerate_level, inner_product, BasisKet, CompiledOp, ModeLabel, ModelParams, Operator, Scalar, Sign, State,
    DEFAULT_CAPACITY,
};
use proptest::prelude::*;

fn kets(pr: &ModelParams, max_degree: usize) -> Vec<State> {
    (0..=max_degree)
        .flat_map(|d| enumerate_level(pr, d, DEFAULT_CAPACITY).unwrap())
        .map(|k| State::from_ket(*pr, k))
        .collect()
}

fn modes(pr: &ModelParams) -> Vec<ModeLabel> {
    let mut out: Vec<ModeLabel> =
        (1..=pr.q()).flat_map(|k| [ModeLabel::Paired(k, Sign::Plus), ModeLabel::Paired(k, Sign::Minus)]).collect();
    if pr.is_odd() {
        out.push(ModeLabel::Odd);
    }
    out
}

fn compile(op: Operator, pr: &ModelParams) -> CompiledOp {
    op.compile(pr).unwrap()
}

fn b(a: usize) -> Operator {
    Operator::Annihilator(a)
}

fn bd(a: usize) -> Operator {
    Operator::Creator(a)
}

#[test]
fn bose_relations() {
    for n in 1..=2 {
        for p in 1..=5 {
            let pr = ModelParams::new(n, p).unwrap();
            let sample = kets(&pr, 4);
            let ms = modes(&pr);
            for alpha in 1..=n {
                for beta in 1..=n {
                    for &m1 in &ms {
                        for &m2 in &ms {
                            let ann_cre = compile(
                                Operator::commutator(
                                    Operator::ModeAnnihilate(alpha, m1),
                                    Operator::ModeCreate(beta, m2),
                                ),
                                &pr,
                            );
                            let cre_cre = compile(
                                Operator::commutator(Operator::ModeCreate(alpha, m1), Operator::ModeCreate(beta, m2)),
                                &pr,
                            );
                            let delta = alpha == beta && m1 == m2;
                            for v in &sample {
                                let expect = if delta { v.clone() } else { State::zero(pr) };
                                assert_eq!(ann_cre.apply(v), expect);
                                assert!(cre_cre.apply(v).is_zero());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn trilinear_relations() {
    for n in 1..=2 {
        for p in 1..=4 {
            let pr = ModelParams::new(n, p).unwrap();
            let sample = kets(&pr, 3);
            for a in 1..=n {
                for be in 1..=n {
                    for g in 1..=n {
                        let two_delta = Scalar::from_int(if be == g { 2 } else { 0 });
                        // [{b_α, b†_β}, b_γ] = −2δ_βγ b_α
                        let r1 = compile(
                            Operator::Sum(vec![
                                Operator::commutator(Operator::anticommutator(b(a), bd(be)), b(g)),
                                Operator::scaled(two_delta.clone(), b(a)),
                            ]),
                            &pr,
                        );
                        // [{b†_α, b_β}, b†_γ] = 2δ_βγ b†_α
                        let r2 = compile(
                            Operator::Sum(vec![
                                Operator::commutator(Operator::anticommutator(bd(a), b(be)), bd(g)),
                                Operator::scaled(-two_delta, bd(a)),
                            ]),
                            &pr,
                        );
                        let r3 = compile(Operator::commutator(Operator::anticommutator(bd(a), bd(be)), bd(g)), &pr);
                        let r4 = compile(Operator::commutator(Operator::anticommutator(b(a), b(be)), b(g)), &pr);
                        for v in &sample {
                            for r in [&r1, &r2, &r3, &r4] {
                                assert!(r.apply(v).is_zero(), "n={n} p={p} ({a},{be},{g}) on {v}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gauge_generators_commute_with_odd_operators() {
    for n in 1..=2 {
        for p in 2..=5 {
            let pr = ModelParams::new(n, p).unwrap();
            let sample = kets(&pr, 2);
            for x in 1..=p {
                for y in 1..=p {
                    if x == y {
                        continue;
                    }
                    for alpha in 1..=n {
                        for odd in [b(alpha), bd(alpha)] {
                            let c = compile(Operator::commutator(Operator::Gauge(x, y), odd), &pr);
                            for v in &sample {
                                assert!(c.apply(v).is_zero(), "G^{{{x}{y}}} n={n} p={p}");
                            }
                        }
                    }
                }
            }
        }
    }
}

/// `[G^{ab}, G^{cd}] = −i(δ^{bc}G^{ad} − δ^{ac}G^{bd} − δ^{bd}G^{ac} + δ^{ad}G^{bc})`
#[test]
fn gauge_structure_constants() {
    for (n, p) in [(1, 3), (1, 4), (2, 4), (1, 5)] {
        let pr = ModelParams::new(n, p).unwrap();
        let sample = kets(&pr, 2);
        let g = |x: usize, y: usize| -> Option<Operator> { (x != y).then_some(Operator::Gauge(x, y)) };
        for a in 1..=p {
            for b_ in 1..=p {
                for c in 1..=p {
                    for d in 1..=p {
                        if a == b_ || c == d {
                            continue;
                        }
                        let mut rhs = Vec::new();
                        let mut push = |cond: bool, sign: i64, op: Option<Operator>| {
                            if let (true, Some(op)) = (cond, op) {
                                rhs.push(Operator::scaled(Scalar::i() * Scalar::from_int(-sign), op));
                            }
                        };
                        push(b_ == c, 1, g(a, d));
                        push(a == c, -1, g(b_, d));
                        push(b_ == d, -1, g(a, c));
                        push(a == d, 1, g(b_, c));
                        let check = compile(
                            Operator::Sum(vec![
                                Operator::commutator(Operator::Gauge(a, b_), Operator::Gauge(c, d)),
                                Operator::scaled(Scalar::from_int(-1), Operator::Sum(rhs)),
                            ]),
                            &pr,
                        );
                        for v in &sample {
                            assert!(check.apply(v).is_zero(), "[G{a}{b_}, G{c}{d}] p={p}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn even_operators_preserve_spin() {
    let pr = ModelParams::new(2, 3).unwrap();
    for v in kets(&pr, 2) {
        let spin = v.first_term().unwrap().0.spin;
        for kind in [parabose::EvenKind::CreateCreate, parabose::EvenKind::CreateAnnih, parabose::EvenKind::AnnihAnnih]
        {
            for a in 1..=2 {
                for c in 1..=2 {
                    let out = Operator::Even(parabose::EvenOpLabel::new(kind, a, c)).apply(&v).unwrap();
                    assert!(out.terms().all(|(k, _)| k.spin == spin));
                }
            }
        }
    }
}

fn arb_state(pr: ModelParams, degree: usize) -> impl Strategy<Value = State> {
    let basis: Vec<BasisKet> = enumerate_level(&pr, degree, DEFAULT_CAPACITY).unwrap();
    let len = basis.len();
    proptest::collection::vec((0..len, -3i64..=3, -3i64..=3, -2i64..=2), 1..5).prop_map(move |picks| {
        let mut s = State::zero(pr);
        for (idx, re, im, s2) in picks {
            let c = Scalar::from_int(re) + Scalar::i() * Scalar::from_int(im) + Scalar::sqrt2() * Scalar::from_int(s2);
            s.add_term(basis[idx].clone(), &c);
        }
        s
    })
}

fn adjoint_case() -> impl Strategy<Value = (ModelParams, State, State)> {
    (1usize..=2, 1usize..=4, 0usize..=2).prop_flat_map(|(n, p, d)| {
        let pr = ModelParams::new(n, p).unwrap();
        (Just(pr), arb_state(pr, d + 1), arb_state(pr, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn creator_is_adjoint_of_annihilator((pr, u, v) in adjoint_case()) {
        for alpha in 1..=pr.n() {
            let lhs = inner_product(&u, &Operator::Creator(alpha).apply(&v).unwrap()).unwrap();
            let rhs = inner_product(&Operator::Annihilator(alpha).apply(&u).unwrap(), &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
