use arcjet_core::algebra::rational::int;
use arcjet_core::formats::{parse_arc, parse_ideal};
use arcjet_core::jet::{fiber_next_level, jet_dim, jet_ideal, jet_membership, obstruction_system, truncate_jet};
use arcjet_core::{parse_poly, Arc, Ideal, MPoly, Rational, Vars};
use num_traits::Zero;
use proptest::prelude::*;

fn cusp() -> Ideal {
    parse_ideal("vars: x y\ngen: y^2 - x^3\n").unwrap()
}

fn whitney() -> Ideal {
    parse_ideal("vars: x y z\ngen: x^2 - z*y^2\n").unwrap()
}

fn jet(rows: &[&[i64]], cap: usize) -> Arc {
    Arc::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), cap).unwrap()
}

// Generators equal up to sign and order.
fn same_up_to_sign(found: &[MPoly], expected: &[MPoly]) -> bool {
    found.len() == expected.len()
        && expected
            .iter()
            .all(|e| found.iter().any(|f| f == e || *f == -e))
}

#[test]
fn cusp_level_one_and_two_equations() {
    let j1 = jet_ideal(&cusp(), 1).unwrap();
    // a_k, b_k of the cusp example are x_k, y_k here.
    let r = &j1.ring;
    let expected = [parse_poly("x_0^3 - y_0^2", r).unwrap(), parse_poly("3*x_1*x_0^2 - 2*y_0*y_1", r).unwrap()];
    assert!(same_up_to_sign(j1.equations.gens(), &expected));

    let j2 = jet_ideal(&cusp(), 2).unwrap();
    let r = &j2.ring;
    let expected = [
        parse_poly("x_0^3 - y_0^2", r).unwrap(),
        parse_poly("3*x_1*x_0^2 - 2*y_0*y_1", r).unwrap(),
        parse_poly("3*x_0^2*x_2 + 3*x_0*x_1^2 - 2*y_0*y_2 - y_1^2", r).unwrap(),
    ];
    assert!(same_up_to_sign(j2.equations.gens(), &expected));
}

#[test]
fn lower_level_equations_reappear_verbatim() {
    for i in [cusp(), whitney(), parse_ideal("vars: x y\ngen: x*y - 1\ngen: x^2 + y\n").unwrap()] {
        for n in 1..4 {
            let hi = jet_ideal(&i, n).unwrap();
            let lo = jet_ideal(&i, n - 1).unwrap();
            for g in lo.equations.gens() {
                let lifted = g.to_ring(&hi.ring).unwrap();
                assert!(hi.equations.gens().contains(&lifted));
            }
        }
    }
}

#[test]
fn empty_fiber_over_vertical_jet() {
    let f = fiber_next_level(&jet(&[&[0], &[0, 1]], 2), &cusp()).unwrap();
    assert!(!f.feasible);
    assert!(f.basepoint.is_none());
}

#[test]
fn fiber_directions_depend_only_on_base_point() {
    let i = parse_ideal("vars: x y\ngen: y - x^2\n").unwrap();
    let a = fiber_next_level(&jet(&[&[1, 1], &[1, 2]], 2), &i).unwrap();
    let b = fiber_next_level(&jet(&[&[1, 3], &[1, 6]], 2), &i).unwrap();
    assert!(a.feasible && b.feasible);
    assert_eq!(a.directions, b.directions);
    assert_ne!(a.basepoint, b.basepoint);
}

#[test]
fn whitney_obstruction_at_order_six() {
    let g = parse_arc("cap: 3\nparams: a\n0\n0 0 1\n0 0 a\n").unwrap();
    let sys = obstruction_system(&g.arc, &whitney(), 4).unwrap();
    let six = sys.at_order(6);
    assert_eq!(six.len(), 1);
    let expected = parse_poly("x_3^2 - a", &sys.ring).unwrap();
    assert!(*six[0] == expected || *six[0] == -&expected);
    for order in 3..6 {
        assert!(sys.at_order(order).is_empty(), "order {order}");
    }
}

#[test]
fn obstruction_at_smooth_point_matches_fiber() {
    let i = cusp();
    let g = jet(&[&[1], &[1]], 1);
    let sys = obstruction_system(&g, &i, 1).unwrap();
    let fiber = fiber_next_level(&g, &i).unwrap();
    // -3*x_1 + 2*y_1 = 0 from both presentations.
    let lin = sys.at_order(1);
    assert_eq!(lin.len(), 1);
    let base = fiber.basepoint.unwrap();
    let point: Vec<Rational> = base.clone();
    assert!(lin[0].eval(&point).is_zero());
    for d in &fiber.directions {
        let moved: Vec<Rational> = base.iter().zip(d).map(|(a, b)| a + b).collect();
        assert!(lin[0].eval(&moved).is_zero());
    }
    assert_eq!(fiber.directions.len(), 1);
}

#[test]
fn jet_dimensions() {
    for n in 0..4 {
        assert_eq!(jet_dim(&cusp(), n).unwrap(), (n as i64 + 1));
    }
    let parabola = parse_ideal("vars: x y\ngen: y - x^2\n").unwrap();
    assert_eq!(jet_dim(&parabola, 1).unwrap(), 2);
    let plane = Ideal::new(&Vars::new(["x", "y"]), Vec::<MPoly>::new()).unwrap();
    for n in 0..4 {
        assert_eq!(jet_dim(&plane, n).unwrap(), 2 * (n as i64 + 1));
    }
}

fn arb_cusp_jet() -> impl Strategy<Value = (Arc, usize)> {
    // (p(t)^2, p(t)^3) lies on the cusp at every level.
    (prop::collection::vec(-3i64..4, 1..4), 2usize..7).prop_map(|(p, cap)| {
        let mut sq = vec![0i64; 2 * p.len()];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                sq[i + j] += a * b;
            }
        }
        let mut cube = vec![0i64; 3 * p.len()];
        for (i, a) in sq.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                cube[i + j] += a * b;
            }
        }
        let shift = |v: &[i64], k: usize| {
            let mut out = vec![0i64; k];
            out.extend_from_slice(v);
            out
        };
        (jet(&[&shift(&sq, 2), &shift(&cube, 3)], cap), cap)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn truncation_preserves_membership((g, cap) in arb_cusp_jet(), k in 0usize..6) {
        let i = cusp();
        prop_assert!(jet_membership(&g, &i).unwrap());
        let n = k % (cap - 1);
        let t = truncate_jet(&g, n).unwrap();
        prop_assert_eq!(t.cap(), n + 1);
        prop_assert!(jet_membership(&t, &i).unwrap());
    }

    #[test]
    fn smooth_points_always_lift(x0 in -4i64..5, x1 in -4i64..5, x2 in -4i64..5) {
        // Jets on y = x^2 up to level 2 built from the graph parametrisation.
        let i = parse_ideal("vars: x y\ngen: y - x^2\n").unwrap();
        let y = [x0 * x0, 2 * x0 * x1, x1 * x1 + 2 * x0 * x2];
        let g = jet(&[&[x0, x1, x2], &y], 3);
        let f = fiber_next_level(&g, &i).unwrap();
        prop_assert!(f.feasible);
        prop_assert_eq!(f.directions.len(), 1);
    }
}
