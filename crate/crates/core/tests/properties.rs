use proptest::prelude::*;

use catbound::homcount::{catalog, count_homs};
use catbound::simplex::{DenseLp, LpStatus};
use catbound::{cat_n, cat_v, cat_w, load_edge_list, Graph};

fn graph_strategy(max_n: u32, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 1..=max_m)
            .prop_map(move |edges| Graph::from_edges(n as usize, edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csr_is_symmetric_and_sorted(g in graph_strategy(20, 60)) {
        let mut total = 0;
        for v in 0..g.vertex_count() as u32 {
            let nbrs = g.neighbors(v);
            prop_assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nbrs.contains(&v));
            for &u in nbrs {
                prop_assert!(g.has_edge(u, v));
            }
            total += nbrs.len();
        }
        prop_assert_eq!(total, g.directed_edge_count());
        prop_assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy(15, 40)) {
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let once = load_edge_list(buf.as_slice()).unwrap();
        let mut again = Vec::new();
        once.write_edge_list(&mut again).unwrap();
        prop_assert_eq!(&buf, &again);
        prop_assert_eq!(once.edge_count(), g.edge_count());
    }

    #[test]
    fn caterpillars_are_reversal_symmetric(
        g in graph_strategy(12, 30),
        ps in prop::collection::vec(0.0f64..3.0, 5),
    ) {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        prop_assert!(close(cat_v(&g, ps[0], ps[1], ps[2]).unwrap(), cat_v(&g, ps[2], ps[1], ps[0]).unwrap()));
        prop_assert!(close(
            cat_n(&g, ps[0], ps[1], ps[2], ps[3]).unwrap(),
            cat_n(&g, ps[3], ps[2], ps[1], ps[0]).unwrap()
        ));
        prop_assert!(close(
            cat_w(&g, ps[0], ps[1], ps[2], ps[3], ps[4]).unwrap(),
            cat_w(&g, ps[4], ps[3], ps[2], ps[1], ps[0]).unwrap()
        ));
    }

    #[test]
    fn hom_counts_ignore_vertex_relabeling(
        g in graph_strategy(8, 16),
        which in 0usize..29,
        seed in any::<u64>(),
    ) {
        let h = &catalog()[which];
        let n = h.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let relabeled = h.relabeled(&perm).unwrap();
        prop_assert_eq!(count_homs(h, &g).unwrap(), count_homs(&relabeled, &g).unwrap());
    }

    #[test]
    fn simplex_matches_vertex_enumeration(
        rows in prop::collection::vec((prop::collection::vec(-3i32..=5, 2), 0i32..=10), 1..=4),
        obj in prop::collection::vec(-2i32..=4, 2),
    ) {
        let mut lp = DenseLp::new(obj.iter().map(|&c| c as f64).collect());
        let mut cons: Vec<([f64; 2], f64)> = Vec::new();
        for (a, b) in &rows {
            lp.push_row(a.iter().map(|&c| c as f64).collect(), *b as f64);
            cons.push(([a[0] as f64, a[1] as f64], *b as f64));
        }
        for j in 0..2 {
            let mut row = vec![0.0; 2];
            row[j] = 1.0;
            lp.push_row(row.clone(), 20.0);
            cons.push(([row[0], row[1]], 20.0));
        }
        cons.push(([-1.0, 0.0], 0.0));
        cons.push(([0.0, -1.0], 0.0));
        let sol = lp.solve().unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);

        let feasible = |x: [f64; 2]| cons.iter().all(|(a, b)| a[0] * x[0] + a[1] * x[1] <= b + 1e-9);
        let mut best = f64::NEG_INFINITY;
        for i in 0..cons.len() {
            for j in i + 1..cons.len() {
                let ((a, b), (c, d)) = (cons[i], cons[j]);
                let det = a[0] * c[1] - a[1] * c[0];
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = [(b * c[1] - a[1] * d) / det, (a[0] * d - b * c[0]) / det];
                if feasible(x) {
                    best = best.max(obj[0] as f64 * x[0] + obj[1] as f64 * x[1]);
                }
            }
        }
        prop_assert!((sol.optimum - best).abs() < 1e-7, "simplex {} vs vertices {}", sol.optimum, best);
        prop_assert!(feasible([sol.primal[0], sol.primal[1]]));
        prop_assert!(sol.dual.iter().all(|&y| y >= -1e-9));
    }
}
