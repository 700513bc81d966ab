use implantphy_core::energy::{detect_crossovers, linear_grid, optimize_with, MODULATION_ORDERS};
use implantphy_core::phy::{
    channel_bit_error, data_rate, db_to_linear, meets_mics_rate, required_snr, required_symbol_energy, watts_to_dbm,
};
use implantphy_core::*;
use proptest::prelude::*;

fn zero_coding() -> ScenarioConfig {
    ScenarioConfig {
        e_enc: 0.0,
        e_dec: 0.0,
        ..Default::default()
    }
}

#[test]
fn channel_and_noise_oracle_values() {
    let deep = TissuePathLoss::deep_tissue();
    assert_eq!(deep.gain_factor_db(0.03, 0.0).unwrap(), 47.14);
    assert!((deep.gain_factor_db(0.1, 0.0).unwrap() - 69.41463454894239).abs() < 1e-9);
    let nm = NoiseModel::default();
    assert!((nm.noise_density() - 2.7005074855257252e-20).abs() < 1e-32);
    assert!((watts_to_dbm(nm.band_noise_power(300e3)) + 110.91433).abs() < 1e-4);
    let cold = NoiseModel { nf_db: 0.0, ..nm };
    assert!((cold.noise_density() - 4.28001593e-21).abs() < 1e-29);
    let loud = NoiseModel { nf_db: 10.0, ..nm };
    assert!((loud.noise_density() / cold.noise_density() - 10.0).abs() < 1e-12);
}

#[test]
fn link_timing_oracle_values() {
    let link = LinkBudget::default();
    assert!((link.symbol_duration() - 3.3333e-6).abs() < 1e-9);
    assert!((link.with_m(4).symbol_duration() - 6.6667e-6).abs() < 1e-9);
    assert_eq!(data_rate(2, 300e3), 300e3);
    assert_eq!(data_rate(4, 300e3), 300e3);
    assert_eq!(data_rate(8, 300e3), 225e3);
    assert!(!meets_mics_rate(8, 300e3));
    assert!((link.active_duration() - 0.027306666666666665).abs() < 1e-12);
    assert!((link.circuit_powers(0.0).p_cr - 30e-3).abs() < 1e-15);
    let extra = link.with_m(4).circuit_powers(0.0).p_cr - link.circuit_powers(0.0).p_cr;
    assert!((extra - 11e-3).abs() < 1e-15);
}

#[test]
fn symbol_energy_oracle() {
    let ld = db_to_linear(69.41463454894239);
    let et = required_symbol_energy(1e-3, 2, ld, 2.70e-20, BerConvention::PerBit).unwrap();
    assert!((et * 1e12 - 2.9327224340900044).abs() < 1e-9);
    assert!(required_snr(0.5, 2, BerConvention::PerBit).is_err());
    assert_eq!(channel_bit_error(0.0, 2, BerConvention::PerBit), 0.5);
}

#[test]
fn optimizer_matches_brute_force_scan() {
    let cfg = ScenarioConfig::default();
    let tables = cfg.rate_tables().unwrap();
    for d in linear_grid(0.03, 0.3, 28) {
        let best = optimize_with(d, &cfg, &tables).unwrap();
        let mut min_u = f64::INFINITY;
        let mut min_c = f64::INFINITY;
        for t in &tables {
            min_u = min_u.min(energy_uncoded(d, t.m, &cfg).unwrap().total);
            for row in &t.rows {
                min_c = min_c.min(energy_coded(d, t.m, row, &cfg).unwrap().total);
            }
        }
        assert_eq!(best.uncoded.total, min_u);
        assert_eq!(best.coded.energy.total, min_c);
    }
}

#[test]
fn sweep_curves_increase_and_cross_once() {
    let cfg = ScenarioConfig::default();
    let grid = linear_grid(0.03, 0.3, 136);
    let pts = sweep_energy_vs_distance(&grid, &cfg).unwrap();
    let best: Vec<Optimum> = pts.iter().map(|p| p.outcome.clone().unwrap()).collect();
    for w in best.windows(2) {
        assert!(w[1].uncoded.total > w[0].uncoded.total);
        assert!(w[1].coded.energy.total > w[0].coded.energy.total);
    }
    let flips = best.windows(2).filter(|w| w[0].winner() != w[1].winner()).count();
    assert_eq!(flips, 1);
    assert_eq!(detect_crossovers(&pts, &cfg).unwrap().len(), 1);
}

#[test]
fn sweep_rejects_unsorted_grid() {
    assert!(sweep_energy_vs_distance(&[0.1, 0.05], &ScenarioConfig::default()).is_err());
}

fn arb_config() -> impl Strategy<Value = ScenarioConfig> {
    (
        40.0f64..55.0,
        3.0f64..5.0,
        0.0f64..1.0,
        5.0f64..12.0,
        prop::sample::select(vec![1e-3, 1e-4, 1e-5]),
        prop::sample::select(vec![62.5e3, 150e3, 300e3]),
    )
        .prop_map(|(l0, eta, alpha, nf, pb, b)| {
            let mut cfg = zero_coding();
            cfg.path_loss.l0_db = l0;
            cfg.path_loss.eta = eta;
            cfg.link.alpha = alpha;
            cfg.noise.nf_db = nf;
            cfg.pb_target = pb;
            cfg.link.bandwidth_hz = b;
            cfg
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decade_adds_ten_eta(d in 0.001f64..1.0, chi in -10.0f64..10.0) {
        let pl = TissuePathLoss::near_surface();
        let step = pl.gain_factor_db(10.0 * d, chi).unwrap() - pl.gain_factor_db(d, chi).unwrap();
        prop_assert!((step - 10.0 * pl.eta).abs() < 1e-9);
    }

    #[test]
    fn required_snr_inverts_ber(pb in 1e-9f64..0.49, m_exp in 1u32..4, per_symbol in any::<bool>()) {
        let m = 1 << m_exp;
        let conv = if per_symbol { BerConvention::PerSymbol } else { BerConvention::PerBit };
        let gamma = required_snr(pb, m, conv).unwrap();
        let back = channel_bit_error(gamma, m, conv);
        prop_assert!((back - pb).abs() <= 1e-12 * pb);
    }

    #[test]
    fn unit_row_is_uncoded(d in 0.01f64..0.3, m_idx in 0usize..2, cfg in arb_config()) {
        let m = MODULATION_ORDERS[m_idx];
        prop_assert_eq!(energy_uncoded(d, m, &cfg).unwrap(), energy_coded(d, m, &RateGainRow::uncoded(), &cfg).unwrap());
    }

    #[test]
    fn breakdown_identities(d in 0.01f64..0.3, rate in 0.1f64..1.0, gain in -3.0f64..10.0) {
        let cfg = ScenarioConfig::default();
        let row = RateGainRow { snr_db: 0.0, rate, gain_db: gain };
        let e = energy_coded(d, 2, &row, &cfg).unwrap();
        prop_assert!((e.total - (e.rf + e.circuit + e.transient + e.coding)).abs() <= 1e-12 * e.total);
        prop_assert!(e.duty_cycle > 0.0 && e.duty_cycle <= 1.0);
        let half = energy_coded(d, 2, &RateGainRow { rate: rate / 2.0, ..row }, &cfg).unwrap();
        prop_assert!((half.duty_cycle - 2.0 * e.duty_cycle).abs() <= 1e-12 * half.duty_cycle);
        prop_assert!(half.rf > e.rf);
        let stronger = energy_coded(d, 2, &RateGainRow { gain_db: gain + 1.0, ..row }, &cfg).unwrap();
        prop_assert!(stronger.rf < e.rf && stronger.total < e.total);
        prop_assert_eq!(stronger.circuit, e.circuit);
    }

    #[test]
    fn frame_length_linearity(d in 0.01f64..0.3, scale in 1u32..8) {
        let cfg = ScenarioConfig::default();
        let mut longer = cfg.clone();
        longer.link.frame_bits = cfg.link.frame_bits * scale;
        longer.link.t_l_s = 100.0;
        let row = RateGainRow { snr_db: 0.0, rate: 0.7, gain_db: 3.0 };
        let a = energy_coded(d, 2, &row, &cfg).unwrap();
        let b = energy_coded(d, 2, &row, &longer).unwrap();
        let scaled = (a.total - a.transient) * scale as f64;
        prop_assert!(((b.total - b.transient) - scaled).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn closed_form_agrees_with_bisection(cfg in arb_config(), m_idx in 0usize..2, row_idx in 0usize..11) {
        let m = MODULATION_ORDERS[m_idx];
        let table = embedded_table(m, cfg.pb_target).unwrap();
        let row = table.rows[row_idx];
        match threshold_distance(m, &row, &cfg).unwrap() {
            Crossover::None => prop_assert!(row.gain_linear() * row.rate <= 1.0),
            Crossover::At { closed_form_m, bisection_m } => {
                if let Some(b) = bisection_m {
                    prop_assert!((closed_form_m - b).abs() < 1e-3, "{} vs {}", closed_form_m, b);
                }
            }
        }
    }
}
