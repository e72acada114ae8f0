use crate::MetricsError;

/// Human-normalizes a raw metric: 0 maps to the random-agent baseline and
/// 1 to the average human reference, linearly in between and beyond.
pub fn normalize(raw: f64, random_baseline: f64, human_reference: f64) -> Result<f64, MetricsError> {
    let span = human_reference - random_baseline;
    if span.abs() < 1e-12 {
        return Err(MetricsError::NormalizationUndefined(format!(
            "baseline {random_baseline} == human {human_reference}"
        )));
    }
    Ok((raw - random_baseline) / span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn anchors_map_to_zero_and_one() {
        assert_eq!(normalize(0.3, 0.3, 0.9).unwrap(), 0.0);
        assert_eq!(normalize(0.9, 0.3, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn linear_beyond_the_anchors() {
        // raw = 2*human - random lands at 2.
        let v = normalize(2.0 * 0.9 - 0.3, 0.3, 0.9).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equal_anchors_are_rejected() {
        assert!(normalize(0.5, 0.4, 0.4).is_err());
    }

    proptest! {
        #[test]
        fn affine_equivariance(
            raw in -10.0..10.0f64,
            random in -10.0..10.0f64,
            human in -10.0..10.0f64,
            a in 0.1..5.0f64,
            b in -3.0..3.0f64,
        ) {
            prop_assume!((human - random).abs() > 1e-6);
            let direct = normalize(raw, random, human).unwrap();
            let mapped = normalize(a * raw + b, a * random + b, a * human + b).unwrap();
            prop_assert!((direct - mapped).abs() < 1e-6);
        }
    }
}
