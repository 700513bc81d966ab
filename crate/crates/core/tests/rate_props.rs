use implantphy_core::phy::BerConvention;
use implantphy_core::rate::{
    de_rate_curve, embedded_csv, embedded_table, mc_rate_estimate, uncoded_reference_snr, DensityEvolution, DeState,
};
use implantphy_core::DegreeDistribution;
use proptest::prelude::*;

mod common;

use common::{transcribed, TARGETS};

#[test]
fn embedded_tables_are_verbatim() {
    for m in [2u32, 4] {
        let rows = transcribed(m);
        for (c, pb) in TARGETS.into_iter().enumerate() {
            let t = embedded_table(m, pb).unwrap();
            assert_eq!(t.rows.len(), rows.len());
            for (row, (snr, cols)) in t.rows.iter().zip(&rows) {
                assert_eq!(row.snr_db, *snr);
                assert_eq!((row.rate, row.gain_db), cols[c]);
            }
        }
    }
    assert_eq!(embedded_csv().lines().next().unwrap(), "M,Pb,snr_dB,rate,gain_dB");
    assert_eq!(embedded_csv().lines().filter(|l| !l.is_empty()).count(), 1 + 3 * (12 + 11));
}

#[test]
fn column_sums_match_uncoded_reference() {
    // Column constants from summing snr + gain over the transcribed rows.
    let printed = [[10.94, 12.31, 13.35], [14.37, 15.64, 16.62]];
    let oracle = [
        [10.94443742308721, 12.313264939150734, 13.352483570959246],
        [14.41396934747088, 15.66335671355388, 16.632456843634444],
    ];
    for (mi, m) in [2u32, 4].into_iter().enumerate() {
        let rows = transcribed(m);
        for (c, pb) in TARGETS.into_iter().enumerate() {
            for (snr, cols) in &rows {
                assert!((snr + cols[c].1 - printed[mi][c]).abs() < 0.011);
            }
            let reference = uncoded_reference_snr(m, pb, BerConvention::PerBit).unwrap();
            assert!((reference - oracle[mi][c]).abs() < 1e-9);
            let t = embedded_table(m, pb).unwrap();
            assert!(t.max_column_deviation() <= 0.05, "M={m} Pb={pb}: {}", t.max_column_deviation());
            if m == 2 {
                assert!((t.column_constant() - reference).abs() <= 0.03);
            }
        }
    }
}

#[test]
fn de_curves_track_published_shape() {
    let grid: Vec<f64> = (3..=14).map(f64::from).collect();
    let curves: Vec<_> = TARGETS.iter().map(|&pb| de_rate_curve(2, pb, &grid).unwrap()).collect();
    for c in &curves {
        assert!(c.points.iter().all(|p| p.decodable));
        assert!(c.points.windows(2).all(|w| w[1].rate >= w[0].rate));
        let t = c.table().unwrap();
        assert!(t.max_column_deviation() < 1e-9);
    }
    for i in 0..3 {
        let rates: Vec<f64> = curves.iter().map(|c| c.points[i].rate).collect();
        let spread = rates.iter().cloned().fold(f64::MIN, f64::max) - rates.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 0.02, "spread {spread} at {} dB", grid[i]);
    }
    let at10 = curves[0].points[7].rate;
    assert!((at10 - 0.8003).abs() <= 0.25 * 0.8003, "{at10}");
}

#[test]
fn mc_rate_drops_with_snr() {
    let hi = mc_rate_estimate(2, 10.0, 1e-3, 1024, 20, 21).unwrap();
    let lo = mc_rate_estimate(2, 6.0, 1e-3, 1024, 20, 21).unwrap();
    assert!(hi.mean_rate > lo.mean_rate, "{} vs {}", hi.mean_rate, lo.mean_rate);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn de_threshold_monotone_in_snr(mut grid in prop::collection::vec(0.0f64..18.0, 2..6), pb_idx in 0usize..3) {
        grid.sort_by(f64::total_cmp);
        let curve = de_rate_curve(2, TARGETS[pb_idx], &grid).unwrap();
        for w in curve.points.windows(2) {
            prop_assert!(w[1].rate >= w[0].rate);
        }
    }

    #[test]
    fn de_state_stays_a_distribution(p in 0.0f64..0.5, rate in 0.05f64..1.0) {
        let de = DensityEvolution::new(&DegreeDistribution::implant());
        let mut s = DeState::initial();
        for _ in 0..30 {
            s = de.step(&s, p, rate);
            prop_assert!((s.total() - 1.0).abs() < 1e-9);
            prop_assert!(s.p_minus >= 0.0 && s.p_zero >= 0.0 && s.p_plus >= 0.0);
        }
    }
}
