use super::AnalysisError;
use crate::formats::{EnergySeries, XvgData};

/// Time series of the requested quantities, one xvg column each.
pub fn extract_energy(series: &EnergySeries, terms: &[&str]) -> Result<XvgData, AnalysisError> {
    let first = series.first().ok_or(AnalysisError::Empty("energy records"))?;
    if terms.is_empty() {
        return Err(AnalysisError::UnknownTerm { name: String::new(), available: first.available() });
    }
    let mut data = XvgData::new("Energies", "Time (ps)", "(kJ/mol)").with_x(series.iter().map(|r| r.time).collect());
    for &name in terms {
        let values: Option<Vec<f64>> = series.iter().map(|r| r.get(name)).collect();
        let values = values.ok_or_else(|| AnalysisError::UnknownTerm {
            name: name.to_string(),
            available: first.available(),
        })?;
        data = data.column(name, values);
    }
    Ok(data)
}
