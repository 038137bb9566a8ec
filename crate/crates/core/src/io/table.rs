use std::fs::{File, OpenOptions};
use std::path::Path;

use crate::dynamics::SimResult;
use crate::error::Result;
use crate::harness::ScanRow;

/// Rows of an existing scan CSV; a missing or empty file gives none.
pub fn read_scan_rows(path: &Path) -> Result<Vec<ScanRow>> {
    if !path.exists() || std::fs::metadata(path)?.len() == 0 {
        return Ok(Vec::new());
    }
    let mut rdr = csv::Reader::from_path(path)?;
    let rows = rdr.deserialize().collect::<std::result::Result<Vec<ScanRow>, _>>()?;
    Ok(rows)
}

pub fn write_scan_rows(path: &Path, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Appends rows to a scan CSV, writing the header only into a new file.
/// Each row is flushed as it is written so an interrupted scan can resume.
pub struct ScanAppender {
    writer: csv::Writer<File>,
}

impl ScanAppender {
    /// Opens `path` for appending and returns the rows already in it.
    pub fn open(path: &Path) -> Result<(Self, Vec<ScanRow>)> {
        let existing = read_scan_rows(path)?;
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        Ok((Self { writer }, existing))
    }

    pub fn push(&mut self, row: &ScanRow) -> Result<()> {
        self.writer.serialize(row)?;
        self.writer.flush()?;
        Ok(())
    }
}

/// Header and values of the one-row summary of a single run.
pub fn sim_summary(run_id: &str, res: &SimResult) -> (Vec<String>, Vec<String>) {
    let m = res.lattice.model();
    let mut header: Vec<String> =
        ["run_id", "seed", "width", "height", "topology", "fixation_time", "horizon_capped", "frac_empty"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let mut values = vec![
        run_id.to_string(),
        m.seed.to_string(),
        m.width.to_string(),
        m.height.to_string(),
        m.topology.to_string(),
        res.fixation_time().to_string(),
        res.horizon_capped.to_string(),
        res.empty_fraction().to_string(),
    ];
    for (i, s) in m.species.iter().enumerate() {
        header.push(format!("frac_{}", s.label));
        values.push(res.fraction(i).to_string());
    }
    (header, values)
}

/// Appends a run summary, writing the header when the file is new.
pub fn append_sim_summary(path: &Path, run_id: &str, res: &SimResult) -> Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    let (header, values) = sim_summary(run_id, res);
    if fresh {
        w.write_record(&header)?;
    }
    w.write_record(&values)?;
    w.flush()?;
    Ok(())
}
