//! Physical results must not depend on how (site, spin) labels are numbered.

use fermicorr::firstq;
use fermicorr::fock::{ModeLayout, SiteSpin, Spin};
use fermicorr::hubbard::{HubbardModel, HubbardParams, ObservablePair};
use fermicorr::slater::{self, DEFAULT_TOL};

fn permutations(items: &[SiteSpin]) -> Vec<Vec<SiteSpin>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[test]
fn all_mode_orderings_agree() {
    let canonical = HubbardModel::default();
    let labels = canonical.layout().labels().to_vec();
    let orderings = permutations(&labels);
    assert_eq!(orderings.len(), 24);

    for x in [0.0, 0.7, 3.0] {
        let p = HubbardParams::from_x(x).unwrap();
        let reference = canonical.ground_state(&p).unwrap();
        let ref_c: Vec<f64> = ObservablePair::ALL
            .iter()
            .map(|&pair| {
                canonical
                    .pair_correlation(&reference.state, pair)
                    .unwrap()
                    .re
            })
            .collect();
        let ref_rank = slater::slater_rank(
            &firstq::from_second_quantized(&reference.state).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap()
        .rank;

        for order in &orderings {
            let model = HubbardModel::new(ModeLayout::from_labels(order.clone()).unwrap()).unwrap();
            let gs = model.ground_state(&p).unwrap();
            assert!((gs.energy - reference.energy).abs() < 1e-12, "{order:?}");
            for (k, &pair) in ObservablePair::ALL.iter().enumerate() {
                let c = model.pair_correlation(&gs.state, pair).unwrap();
                assert!(c.im.abs() < 1e-12);
                assert!(
                    (c.re - ref_c[k]).abs() < 1e-12,
                    "x = {x}, pair {}, {order:?}",
                    pair.roman()
                );
            }
            let w = firstq::from_second_quantized(&gs.state).unwrap();
            assert_eq!(slater::slater_rank(&w, DEFAULT_TOL).unwrap().rank, ref_rank);
        }
    }
}

#[test]
fn site_swap_preserves_observables() {
    let swapped = vec![
        SiteSpin {
            site: 1,
            spin: Spin::Up,
        },
        SiteSpin {
            site: 1,
            spin: Spin::Down,
        },
        SiteSpin {
            site: 0,
            spin: Spin::Up,
        },
        SiteSpin {
            site: 0,
            spin: Spin::Down,
        },
    ];
    let model = HubbardModel::new(ModeLayout::from_labels(swapped).unwrap()).unwrap();
    let gs = model
        .ground_state(&HubbardParams::from_x(1.0).unwrap())
        .unwrap();
    let c = model
        .pair_correlation(&gs.state, ObservablePair::SiteSpins)
        .unwrap()
        .re;
    assert!((c + (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
}
