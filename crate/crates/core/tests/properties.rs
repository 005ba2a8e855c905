use num_bigint::BigInt;
use proptest::prelude::*;

use fibcirc::circulant::{
    build_f_matrix, build_g_matrix, build_h_matrix, det_bareiss, det_bruteforce, det_closed_f, det_closed_g,
    det_closed_h, eigenvalues_closed_f, eigenvalues_dft, gcirc_from_row, rcirc_from_row, RatioCirculantParams,
    SquareMatrix,
};
use fibcirc::codec::{
    deserialize_packet, encode, serialize_packet, Algorithm, BlockRecord, CharTable, CodePacket, WorkingMatrix, ALPHABET,
};
use fibcirc::polyseq::{
    char_roots, fibonacci_binet, fibonacci_seq, lucas_binet, lucas_seq, IntRecurrenceParams, RecurrenceParams,
};

fn float_params() -> impl Strategy<Value = RecurrenceParams> {
    (-5.0f64..5.0, -5.0f64..5.0)
        .prop_filter_map("p, q nonzero with positive discriminant", |(p, q)| RecurrenceParams::new(p, q).ok())
}

fn int_params() -> impl Strategy<Value = IntRecurrenceParams> {
    (-6i64..=6, -6i64..=6).prop_filter_map("valid integer params", |(p, q)| IntRecurrenceParams::new(p, q).ok())
}

fn ratio_params() -> impl Strategy<Value = RatioCirculantParams> {
    (float_params(), 0.5f64..3.0, 0.5f64..3.0, 1usize..=12).prop_filter_map("r clear of the roots", |(pq, a, r, n)| {
        let roots = char_roots(&pq);
        let clear = [roots.alpha, -roots.alpha, roots.beta, -roots.beta].iter().all(|x| (r - x).abs() > 0.05);
        clear.then(|| RatioCirculantParams::new(pq, a, r, n).ok()).flatten()
    })
}

fn rel(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

fn message() -> impl Strategy<Value = String> {
    "[A-Z ]{1,200}"
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn binet_matches_recurrence(pq in float_params()) {
        let (f, l) = (fibonacci_seq(&pq, 31), lucas_seq(&pq, 31));
        for n in 0..=30u32 {
            prop_assert!(rel(fibonacci_binet(&pq, n), f[n as usize]) <= 1e-8);
            prop_assert!(rel(lucas_binet(&pq, n), l[n as usize]) <= 1e-8);
        }
    }

    #[test]
    fn root_identities(pq in float_params()) {
        let r = char_roots(&pq);
        let scale = pq.discriminant().max(pq.p().abs()).max(pq.q().abs()).max(1.0);
        prop_assert!((r.alpha + r.beta - pq.p()).abs() <= 1e-12 * scale);
        prop_assert!((r.alpha * r.beta + pq.q()).abs() <= 1e-12 * scale);
        prop_assert!(((r.alpha - r.beta).powi(2) - pq.discriminant()).abs() <= 1e-10 * scale);
    }

    #[test]
    fn exact_and_float_sequences_agree(ip in int_params()) {
        let fp = ip.to_float().unwrap();
        let (fe, le) = (fibonacci_seq(&ip, 25), lucas_seq(&ip, 25));
        let (ff, lf) = (fibonacci_seq(&fp, 25), lucas_seq(&fp, 25));
        // compare only while every term is exactly representable as f64
        let limit = BigInt::from(1u64 << 53);
        for k in (0..25).take_while(|&k| num_traits::Signed::abs(&fe[k]) < limit && num_traits::Signed::abs(&le[k]) < limit) {
            prop_assert_eq!(BigInt::from(ff[k] as i64), fe[k].clone());
            prop_assert_eq!(BigInt::from(lf[k] as i64), le[k].clone());
        }
    }

    #[test]
    fn lucas_from_fibonacci(ip in int_params()) {
        let (f, l) = (fibonacci_seq(&ip, 30), lucas_seq(&ip, 30));
        for n in 1..29 {
            prop_assert_eq!(l[n].clone(), &f[n + 1] + ip.q() * &f[n - 1]);
        }
    }

    #[test]
    fn closed_forms_match_bareiss(ip in int_params(), n in 1usize..=7) {
        let g = det_bareiss(&build_g_matrix(&ip, n).unwrap().to_dense().unwrap());
        let h = det_bareiss(&build_h_matrix(&ip, n).unwrap().to_dense().unwrap());
        prop_assert_eq!(det_closed_g(&ip, n).unwrap(), g);
        prop_assert_eq!(det_closed_h(&ip, n).unwrap().value, h);
    }

    #[test]
    fn spectrum_and_determinant_are_consistent(rp in ratio_params()) {
        let closed = eigenvalues_closed_f(&rp).unwrap();
        let det = det_closed_f(&rp).unwrap();
        let product = closed.product();
        prop_assert!(rel(det, product.re) <= 1e-8);
        prop_assert!(product.im.abs() <= 1e-8 * product.norm().max(1.0));
        let dft = eigenvalues_dft(&build_f_matrix(&rp));
        prop_assert!(rel(det, dft.product().re) <= 1e-6);
    }

    #[test]
    fn char_table_is_a_bijection(offset in 1u64..10_000) {
        let table = CharTable::new(offset).unwrap();
        let mut seen = [false; 28];
        for ch in ALPHABET {
            let code = table.code(ch).unwrap();
            prop_assert!((1..=27).contains(&code));
            prop_assert!(!seen[code as usize]);
            seen[code as usize] = true;
            prop_assert_eq!(table.symbol(i64::from(code)).unwrap(), ch);
        }
    }

    #[test]
    fn packet_serialization_round_trips(msg in message(), lucas in any::<bool>()) {
        let alg = if lucas { Algorithm::Lucas2 } else { Algorithm::Fib3 };
        let packet = encode(&msg, alg).unwrap();
        prop_assert_eq!(deserialize_packet(&serialize_packet(&packet)).unwrap(), packet);
    }

    #[test]
    fn step4_coefficient_is_the_finite_difference(cells in prop::collection::vec(1i64..=27, 9), lucas in any::<bool>()) {
        let alg = if lucas { Algorithm::Lucas2 } else { Algorithm::Fib3 };
        let w = WorkingMatrix::standard(alg);
        let dim = alg.dim();
        let (hr, hc) = alg.hidden_cell();
        let det_e = |x: i64| {
            let mut b: Vec<Vec<i64>> = (0..dim).map(|r| cells[r * dim..(r + 1) * dim].to_vec()).collect();
            b[hr][hc] = x;
            let e = SquareMatrix::from_fn(dim, |i, j| (0..dim).map(|t| BigInt::from(b[i][t] * w.entry(t, j))).sum::<BigInt>());
            det_bruteforce(&e)
        };
        let retained: Vec<i64> = alg.retained_cells().iter().map(|&c| cells[(c / dim) * dim + c % dim]).collect();
        let record = BlockRecord { d: 0, retained };
        let eq = w.step4_equation(&record).unwrap();
        let x = cells[hr * dim + hc];
        prop_assert_eq!(BigInt::from(eq.coefficient), det_e(x + 1) - det_e(x));
        prop_assert_eq!(BigInt::from(eq.evaluate(i128::from(x))), det_e(x));
    }

    #[test]
    fn packet_determinant_identity(msg in message(), lucas in any::<bool>()) {
        // det(W)·d equals det(B·W) for every block
        let alg = if lucas { Algorithm::Lucas2 } else { Algorithm::Fib3 };
        let w = WorkingMatrix::standard(alg);
        let packet: CodePacket = encode(&msg, alg).unwrap();
        for record in &packet.records {
            let eq = w.step4_equation(record).unwrap();
            // any block whose equation solves reproduces det(W)·d exactly
            if let Ok(x) = eq.solve() {
                prop_assert_eq!(eq.evaluate(i128::from(x)), eq.lhs);
            }
        }
    }

    #[test]
    fn right_circulant_shift(row in prop::collection::vec(-50i64..50, 1..10)) {
        let n = row.len();
        let m = rcirc_from_row(row.clone()).unwrap().to_dense().unwrap();
        for i in 1..n {
            for j in 0..n {
                prop_assert_eq!(m.get(i, j), m.get(i - 1, (j + n - 1) % n));
            }
        }
        let g1 = gcirc_from_row(row, n + 1).unwrap();
        prop_assert_eq!(g1, m);
    }
}
