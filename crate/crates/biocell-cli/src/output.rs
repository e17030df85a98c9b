//! Transactional file output and the CSV writers owned by the CLI.
//!
//! Every command stages its outputs as temporary files in the destination
//! directory and renames them into place only after all of them were written,
//! so a failure never leaves a partial file behind.

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use biocell::kinetics::Trajectory;
use biocell::montecarlo::EnsembleStats;

#[derive(Default)]
pub struct StagedOutputs {
    staged: Vec<(tempfile::NamedTempFile, PathBuf)>,
}

impl StagedOutputs {
    pub fn new() -> Self {
        StagedOutputs::default()
    }

    /// Writes one output into a temp file next to its destination.
    pub fn stage(
        &mut self,
        path: &Path,
        write: impl FnOnce(&mut dyn Write) -> Result<()>,
    ) -> Result<()> {
        let dir = match path.parent() {
            Some(parent) if !parent.as_os_str().is_empty() => parent,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::Builder::new()
            .prefix(".biocell.")
            .tempfile_in(dir)
            .with_context(|| format!("creating temporary file for {}", path.display()))?;
        {
            let mut buf = BufWriter::new(tmp.as_file_mut());
            write(&mut buf).with_context(|| format!("writing {}", path.display()))?;
            buf.flush().with_context(|| format!("writing {}", path.display()))?;
        }
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    /// Moves every staged file to its destination and reports them.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.staged.len());
        for (tmp, path) in self.staged {
            tmp.persist(&path)
                .map_err(|e| anyhow::anyhow!("moving output into {}: {}", path.display(), e.error))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// `t_s,S_uM,V_uM_per_s,P_mW_cm2`, one row per strided sample; the final
/// sample is always included.
pub fn write_trajectory_csv(
    traj: &Trajectory,
    stride: usize,
    w: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(w, "t_s,S_uM,V_uM_per_s,P_mW_cm2")?;
    let last = traj.points.len() - 1;
    for (i, pt) in traj.points.iter().enumerate() {
        if i % stride == 0 || i == last {
            writeln!(w, "{},{},{},{}", pt.t, pt.s, pt.v, pt.p)?;
        }
    }
    Ok(())
}

/// `t_s,mean_P,std_P,q05_P,q50_P,q95_P,mean_S_uM`, one row per stats point.
pub fn write_ensemble_csv(stats: &EnsembleStats, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "t_s,mean_P,std_P,q05_P,q50_P,q95_P,mean_S_uM")?;
    for j in 0..stats.times.len() {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            stats.times[j],
            stats.mean_p[j],
            stats.std_p[j],
            stats.q05_p[j],
            stats.q50_p[j],
            stats.q95_p[j],
            stats.mean_s[j],
        )?;
    }
    Ok(())
}

/// Thins a point series to at most `max_points` for SVG rendering.
pub fn thin_for_svg(points: &[(f64, f64)], max_points: usize) -> Vec<(f64, f64)> {
    if points.len() <= max_points {
        return points.to_vec();
    }
    let stride = points.len().div_ceil(max_points);
    let mut thinned: Vec<(f64, f64)> =
        points.iter().step_by(stride).copied().collect();
    if let Some(&last) = points.last() {
        if thinned.last() != Some(&last) {
            thinned.push(last);
        }
    }
    thinned
}
