pub mod calib;
pub mod coref;
pub mod events;
pub mod tag;
pub mod text;

use calibtk::calib::Evaluation;
use calibtk::formats::{bins_csv, report_json};
use calibtk::svg::reliability_svg;

use crate::error::{write_text, CliResult};
use crate::{error, ReportOutputs};

/// Writes the report JSON plus any requested CSV and SVG, and warns when
/// every pair fell into a single undersized bin.
pub fn write_report(ev: &Evaluation<f64>, outputs: &ReportOutputs, title: &str) -> CliResult<()> {
    if ev.low_confidence {
        error::warn(format!(
            "{} pairs is below the bin size {}; reporting a single low-confidence bin",
            ev.n, ev.bin_size
        ));
    }
    error::emit(outputs.out.as_deref(), &report_json(ev))?;
    if let Some(path) = &outputs.bins_csv {
        write_text(path, &bins_csv(ev))?;
    }
    if let Some(path) = &outputs.svg {
        let curve = calibtk::calib::reliability_curve(&ev.bins)?;
        write_text(path, &reliability_svg(&curve, title))?;
    }
    Ok(())
}
