use scomab_core::datafit::fit_gamma_moments;
use scomab_core::regression::{ols_fit, student_t_two_sided, DesignMatrix};
use scomab_core::simulation::{combined_z, simulate_steps, Direction, ScoProfile};

#[test]
fn single_precision_matches_double() {
    let rows64: Vec<Vec<f64>> = (0..12).map(|i| vec![1.0, f64::from(i), f64::from(i * i % 7)]).collect();
    let y64: Vec<f64> = rows64.iter().map(|r| 3.0 + 0.5 * r[1] - 0.25 * r[2] + if r[1] as i32 % 2 == 0 { 0.1 } else { -0.1 }).collect();
    let rows32: Vec<Vec<f32>> = rows64.iter().map(|r| r.iter().map(|&v| v as f32).collect()).collect();
    let y32: Vec<f32> = y64.iter().map(|&v| v as f32).collect();
    let f64_fit = ols_fit(&DesignMatrix::from_rows(&rows64).unwrap(), &y64).unwrap();
    let f32_fit = ols_fit(&DesignMatrix::from_rows(&rows32).unwrap(), &y32).unwrap();
    for (a, b) in f64_fit.coefficients.iter().zip(&f32_fit.coefficients) {
        assert!((a - f64::from(*b)).abs() < 1e-4, "{a} vs {b}");
    }

    let sco = ScoProfile::new(0.3, 0.6).unwrap();
    assert_eq!(simulate_steps(5000.0_f32, 7000.0, Direction::Upward, &sco), 5600.0);
    assert!((combined_z(&[4000.0_f32, 6000.0], &[2.0, 4.0], 6000.0, 4.0) - 1.0).abs() < 1e-6);
    assert!((student_t_two_sided(2.0_f32, 10.0) - 0.073_388_03).abs() < 1e-5);

    let samples: Vec<f32> = [6000.0, 9000.0, 12000.0, 7000.0, 9400.0].to_vec();
    let fit = fit_gamma_moments(&samples).unwrap();
    let fit64 = fit_gamma_moments(&samples.iter().map(|&v| f64::from(v)).collect::<Vec<_>>()).unwrap();
    assert!((f64::from(fit.k) - fit64.k).abs() / fit64.k < 1e-5);
}
