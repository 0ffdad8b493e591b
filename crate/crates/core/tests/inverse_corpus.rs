use holomellin::inverse::{rec_to_ode, rec_to_ode_traced};
use holomellin::operators::{normalize_diffop, DiffOp, RecOp};
use holomellin::poly::{Polynomial, Var};

fn pn(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c, Var::N)
}
fn px(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c, Var::X)
}
fn prod(ps: &[Polynomial]) -> Polynomial {
    ps.iter().fold(Polynomial::one(ps[0].var()), |a, b| &a * b)
}

fn ex1() -> RecOp {
    RecOp::homogeneous(vec![pn(&[-1, -1]), pn(&[-1]), pn(&[2, 1])]).unwrap()
}

fn ex2() -> RecOp {
    RecOp::homogeneous(vec![
        prod(&[pn(&[1, 1]), pn(&[2, 1]), pn(&[2, 1])]),
        -&prod(&[pn(&[2, 1]), pn(&[11, 7, 1])]),
        pn(&[1, -6, -5, -1]),
        pn(&[3, 1]).pow(3),
    ])
    .unwrap()
}

fn ex3_f() -> RecOp {
    RecOp::homogeneous(vec![
        prod(&[pn(&[4]), pn(&[1, 1]), pn(&[2, 1])]),
        -&prod(&[pn(&[2]), pn(&[2, 1]), pn(&[7, 2])]),
        pn(&[2, -2, -1]),
        pn(&[3, 1]).pow(2),
    ])
    .unwrap()
}

fn ex3_g() -> RecOp {
    RecOp::homogeneous(vec![pn(&[]), pn(&[-4, -2]), pn(&[4, 1]), pn(&[3, 1])]).unwrap()
}

fn ex3_h() -> RecOp {
    RecOp::homogeneous(vec![pn(&[-1, -1]), pn(&[1]), pn(&[2, 1])]).unwrap()
}

fn assert_same(got: &DiffOp, expected: DiffOp) {
    assert_eq!(got, &normalize_diffop(&expected).unwrap(), "got {got}");
}

#[test]
fn first_example() {
    let ode = rec_to_ode(&ex1()).unwrap();
    assert_same(&ode, DiffOp::new(vec![px(&[0, -1, -1]), px(&[0, 1, 0, -1])]).unwrap());
    assert_eq!(ode.to_string(), "(x - 1)*Dx + 1");
}

#[test]
fn second_example() {
    let m = |c: &[i64]| px(c);
    let q3 = -&prod(&[m(&[-1, 1]), m(&[-1, 1]), m(&[1, 1]), m(&[0, 0, 0, 1])]);
    let q2 = -&prod(&[m(&[-1, 1]), m(&[-1, 2]), m(&[1, 3]), m(&[0, 0, 1])]);
    let q1 = -&prod(&[m(&[-1, 1]), m(&[-1, 7]), m(&[0, 0, 1])]);
    let q0 = -&prod(&[m(&[-1, 1]), m(&[0, 0, 1])]);
    let ode = rec_to_ode(&ex2()).unwrap();
    assert_same(&ode, DiffOp::new(vec![q0, q1, q2, q3]).unwrap());
}

#[test]
fn third_example_first_recurrence() {
    let expected = DiffOp::new(vec![
        px(&[0, -2, 3]),
        px(&[0, 4, -16, 13]),
        px(&[0, 8, -10, -9, 8]),
        px(&[0, 0, 4, -4, -1, 1]),
    ])
    .unwrap();
    let t = rec_to_ode_traced(&ex3_f()).unwrap();
    assert!(t.differentiated);
    assert_same(&t.ode, expected);
}

#[test]
fn third_example_g_and_h() {
    let g = rec_to_ode(&ex3_g()).unwrap();
    assert_same(&g, DiffOp::new(vec![px(&[0, 0, 1, -1]), px(&[0, 0, 2, -1, -1])]).unwrap());
    let h = rec_to_ode(&ex3_h()).unwrap();
    assert_same(&h, DiffOp::new(vec![px(&[0, 1, -1]), px(&[0, 1, 0, -1])]).unwrap());
}

#[test]
fn passes_and_orders_on_the_corpus() {
    for rec in [ex1(), ex2(), ex3_f(), ex3_g(), ex3_h()] {
        let t = rec_to_ode_traced(&rec).unwrap();
        let max_deg = t.input.max_degree();
        assert!(t.degrees.len() <= max_deg + 1);
        assert!(t.degrees.windows(2).all(|w| w[0] > w[1]));
        assert!(t.ode.order() <= max_deg + 1);
        if !t.differentiated {
            assert_eq!(t.ode.order(), max_deg);
        }
    }
}

#[test]
fn raw_and_normalized_input_agree() {
    // the relation at n + 1, scaled, gives the same result
    for rec in [ex1(), ex2(), ex3_g(), ex3_h()] {
        let scaled = RecOp::homogeneous(
            std::iter::once(pn(&[]))
                .chain(rec.coeffs().iter().map(|p| p.shift(1).scale(&holomellin::scalar::int(-3))))
                .collect(),
        )
        .unwrap();
        assert_eq!(rec_to_ode(&scaled).unwrap(), rec_to_ode(&rec).unwrap());
    }
}

#[test]
fn trace_lines() {
    let t = rec_to_ode_traced(&ex1()).unwrap();
    let lines = t.lines();
    assert_eq!(lines[0], "input: (n + 2)*S^2 - S - (n + 1) = 0");
    assert_eq!(lines[1], "pass 1 (degree 1): -(x^3 - x)*f'(x) - f(n+2) - f(n+1) = 0");
    assert_eq!(lines[2], "pass 2 (degree 0): -(x^3 - x)*f'(x) - (x^2 + x)*f(x) = 0");
    assert_eq!(lines.last().unwrap(), "result: (x - 1)*Dx + 1 = 0");
}
