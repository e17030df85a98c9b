//! Biocell performance records and the respiration-vs-photosynthesis
//! comparison dataset.
//!
//! The crate ships the two published respiration-based data points built in;
//! photosynthetic (BPV) points are user-supplied through the documented CSV
//! schema, never fabricated. An empty template with the expected header
//! lives at `data/photosynthetic_template.csv`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::svg;

/// Exact header of the record CSV schema, in order.
pub const CSV_HEADER: [&str; 8] = [
    "label",
    "kind",
    "max_power_density_mw_cm2",
    "max_current_density_ma_cm2",
    "voltage_v",
    "lifetime_h",
    "lifetime_is_lower_bound",
    "source",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiocellKind {
    Respiration,
    Photosynthetic,
}

impl BiocellKind {
    pub fn name(self) -> &'static str {
        match self {
            BiocellKind::Respiration => "respiration",
            BiocellKind::Photosynthetic => "photosynthetic",
        }
    }
}

impl std::fmt::Display for BiocellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One published biocell's performance figures.
#[derive(Debug, Clone, PartialEq)]
pub struct BiocellRecord {
    pub label: String,
    pub kind: BiocellKind,
    /// \[mW/cm²\], > 0.
    pub max_power_density: f64,
    /// \[mA/cm²\], > 0.
    pub max_current_density: f64,
    /// Voltage at maximum power \[V\], if reported.
    pub voltage_at_max_power: Option<f64>,
    /// Operating lifetime \[h\], if reported.
    pub lifetime_hours: Option<f64>,
    /// Set when the reported lifetime is a lower bound ("exceeding N hours").
    pub lifetime_is_lower_bound: bool,
    pub source: String,
}

/// The two respiration-based cells the comparison is anchored on: the
/// PET-nanochannel cell (0.91 mW/cm² at 3.1 mA/cm² and 0.35 V, lifetime
/// beyond 60 h) and the SPEEK-fiber cell (1.21 mW/cm² at 6.42 mA/cm²,
/// operated for 8 days = 192 h).
pub fn builtin_records() -> Vec<BiocellRecord> {
    vec![
        BiocellRecord {
            label: "PET-nanochannel biocell".to_string(),
            kind: BiocellKind::Respiration,
            max_power_density: 0.91,
            max_current_density: 3.1,
            voltage_at_max_power: Some(0.35),
            lifetime_hours: Some(60.0),
            lifetime_is_lower_bound: true,
            source: "published PET-nanochannel mitochondrial biocell study".to_string(),
        },
        BiocellRecord {
            label: "SPEEK-fiber biocell".to_string(),
            kind: BiocellKind::Respiration,
            max_power_density: 1.21,
            max_current_density: 6.42,
            voltage_at_max_power: None,
            lifetime_hours: Some(192.0),
            lifetime_is_lower_bound: false,
            source: "published SPEEK-fiber mitochondrial biocell study".to_string(),
        },
    ]
}

/// Writes records in the documented CSV schema. Numeric fields use the
/// shortest round-trip decimal form, so ingesting the output reproduces the
/// values bit for bit.
pub fn write_records_csv<W: Write>(records: &[BiocellRecord], w: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer
        .write_record(CSV_HEADER)
        .map_err(|e| csv_io_error(&e))?;
    for rec in records {
        writer
            .write_record([
                rec.label.as_str(),
                rec.kind.name(),
                &rec.max_power_density.to_string(),
                &rec.max_current_density.to_string(),
                &rec.voltage_at_max_power.map(|v| v.to_string()).unwrap_or_default(),
                &rec.lifetime_hours.map(|v| v.to_string()).unwrap_or_default(),
                if rec.lifetime_is_lower_bound { "true" } else { "false" },
                rec.source.as_str(),
            ])
            .map_err(|e| csv_io_error(&e))?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_io_error(e: &csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Reads and validates records from the documented CSV schema. Malformed
/// input is reported with its file line number and column name; the header
/// must match [`CSV_HEADER`] exactly (unknown or missing columns are errors).
pub fn ingest_records<R: Read>(reader: R) -> Result<Vec<BiocellRecord>> {
    let mut csv_reader = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Ingest {
            line: 1,
            column: "<header>".to_string(),
            message: e.to_string(),
        })?
        .clone();
    if headers.len() != CSV_HEADER.len()
        || headers.iter().zip(CSV_HEADER).any(|(got, want)| got != want)
    {
        return Err(Error::Ingest {
            line: 1,
            column: "<header>".to_string(),
            message: format!(
                "header must be exactly `{}`, got `{}`",
                CSV_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut records = Vec::new();
    for row in csv_reader.records() {
        let row = row.map_err(|e| Error::Ingest {
            line: e
                .position()
                .map_or(0, |p| p.line()),
            column: "<row>".to_string(),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |idx: usize| row.get(idx).unwrap_or("").trim();

        let ingest_err = |column: &str, message: String| Error::Ingest {
            line,
            column: column.to_string(),
            message,
        };
        let required_positive = |idx: usize| -> Result<f64> {
            let raw = field(idx);
            let v: f64 = raw
                .parse()
                .map_err(|_| ingest_err(CSV_HEADER[idx], format!("expected a number, got `{raw}`")))?;
            if !v.is_finite() || v <= 0.0 {
                return Err(ingest_err(CSV_HEADER[idx], format!("must be > 0, got {v}")));
            }
            Ok(v)
        };

        let kind = match field(1) {
            "respiration" => BiocellKind::Respiration,
            "photosynthetic" => BiocellKind::Photosynthetic,
            other => {
                return Err(ingest_err(
                    "kind",
                    format!("expected `respiration` or `photosynthetic`, got `{other}`"),
                ))
            }
        };

        let voltage = match field(4) {
            "" => None,
            raw => Some(raw.parse::<f64>().map_err(|_| {
                ingest_err("voltage_v", format!("expected a number or empty, got `{raw}`"))
            })?),
        };
        let lifetime = match field(5) {
            "" => None,
            raw => {
                let v: f64 = raw.parse().map_err(|_| {
                    ingest_err("lifetime_h", format!("expected a number or empty, got `{raw}`"))
                })?;
                if !v.is_finite() || v < 0.0 {
                    return Err(ingest_err("lifetime_h", format!("must be >= 0, got {v}")));
                }
                Some(v)
            }
        };
        let lower_bound = match field(6) {
            "" => false,
            raw => raw.parse::<bool>().map_err(|_| {
                ingest_err(
                    "lifetime_is_lower_bound",
                    format!("expected `true`, `false` or empty, got `{raw}`"),
                )
            })?,
        };

        records.push(BiocellRecord {
            label: field(0).to_string(),
            kind,
            max_power_density: required_positive(2)?,
            max_current_density: required_positive(3)?,
            voltage_at_max_power: voltage,
            lifetime_hours: lifetime,
            lifetime_is_lower_bound: lower_bound,
            source: field(7).to_string(),
        });
    }
    Ok(records)
}

/// One comparison point: current density on x, power density on y.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub label: String,
    /// Max current density \[mA/cm²\].
    pub x: f64,
    /// Max power density \[mW/cm²\].
    pub y: f64,
}

/// The comparison dataset, split into the two series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScatterDataset {
    pub respiration: Vec<ScatterPoint>,
    pub photosynthetic: Vec<ScatterPoint>,
}

/// Projects records onto the comparison axes, preserving duplicates and
/// order. Errors on an empty record list.
pub fn emit_scatter(records: &[BiocellRecord]) -> Result<ScatterDataset> {
    if records.is_empty() {
        return Err(Error::Domain("cannot emit a scatter from zero records".to_string()));
    }
    let mut dataset = ScatterDataset::default();
    for rec in records {
        let point = ScatterPoint {
            label: rec.label.clone(),
            x: rec.max_current_density,
            y: rec.max_power_density,
        };
        match rec.kind {
            BiocellKind::Respiration => dataset.respiration.push(point),
            BiocellKind::Photosynthetic => dataset.photosynthetic.push(point),
        }
    }
    Ok(dataset)
}

/// Writes the scatter dataset as CSV:
/// `kind,label,max_current_density_ma_cm2,max_power_density_mw_cm2`.
pub fn write_scatter_csv<W: Write>(dataset: &ScatterDataset, w: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer
        .write_record(["kind", "label", "max_current_density_ma_cm2", "max_power_density_mw_cm2"])
        .map_err(|e| csv_io_error(&e))?;
    for (kind, points) in [
        (BiocellKind::Respiration, &dataset.respiration),
        (BiocellKind::Photosynthetic, &dataset.photosynthetic),
    ] {
        for pt in points {
            writer
                .write_record([kind.name(), pt.label.as_str(), &pt.x.to_string(), &pt.y.to_string()])
                .map_err(|e| csv_io_error(&e))?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Decorative scatter rendering of the dataset.
pub fn scatter_svg(dataset: &ScatterDataset) -> String {
    let as_pairs = |pts: &[ScatterPoint]| pts.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>();
    svg::scatter(
        "biocell performance comparison",
        "max current density [mA/cm²]",
        "max power density [mW/cm²]",
        &[
            ("respiration", as_pairs(&dataset.respiration)),
            ("photosynthetic", as_pairs(&dataset.photosynthetic)),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_records_carry_the_published_figures() {
        let records = builtin_records();
        assert_eq!(records.len(), 2);
        let pet = &records[0];
        assert_eq!(pet.kind, BiocellKind::Respiration);
        assert_eq!(pet.max_power_density, 0.91);
        assert_eq!(pet.max_current_density, 3.1);
        assert_eq!(pet.voltage_at_max_power, Some(0.35));
        assert_eq!(pet.lifetime_hours, Some(60.0));
        assert!(pet.lifetime_is_lower_bound);
        let speek = &records[1];
        assert_eq!(speek.max_power_density, 1.21);
        assert_eq!(speek.max_current_density, 6.42);
        assert_eq!(speek.voltage_at_max_power, None);
        assert_eq!(speek.lifetime_hours, Some(192.0));
        assert!(!speek.lifetime_is_lower_bound);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let records = builtin_records();
        let mut buf = Vec::new();
        write_records_csv(&records, &mut buf).unwrap();
        let back = ingest_records(buf.as_slice()).unwrap();
        assert_eq!(records, back);
    }

    #[test]
    fn ingest_well_formed_rows() {
        let csv = "label,kind,max_power_density_mw_cm2,max_current_density_ma_cm2,voltage_v,lifetime_h,lifetime_is_lower_bound,source\n\
                   cell a,respiration,0.5,1.5,0.3,10,false,src a\n\
                   cell b,photosynthetic,0.01,0.2,,,,src b\n\
                   cell c,photosynthetic,0.02,0.4,0.6,100,true,src c\n";
        let records = ingest_records(csv.as_bytes()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[1].kind, BiocellKind::Photosynthetic);
        assert_eq!(records[1].voltage_at_max_power, None);
        assert!(!records[1].lifetime_is_lower_bound);
        assert_eq!(records[2].lifetime_hours, Some(100.0));
    }

    #[test]
    fn ingest_rejects_unknown_kind_with_line() {
        let csv = "label,kind,max_power_density_mw_cm2,max_current_density_ma_cm2,voltage_v,lifetime_h,lifetime_is_lower_bound,source\n\
                   ok,respiration,0.5,1.5,,,,x\n\
                   bad,solar,0.5,1.5,,,,x\n";
        match ingest_records(csv.as_bytes()) {
            Err(Error::Ingest { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, "kind");
            }
            other => panic!("expected Ingest error, got {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_nonpositive_power() {
        let csv = "label,kind,max_power_density_mw_cm2,max_current_density_ma_cm2,voltage_v,lifetime_h,lifetime_is_lower_bound,source\n\
                   bad,respiration,-0.5,1.5,,,,x\n";
        match ingest_records(csv.as_bytes()) {
            Err(Error::Ingest { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, "max_power_density_mw_cm2");
            }
            other => panic!("expected Ingest error, got {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_non_numeric_current() {
        let csv = "label,kind,max_power_density_mw_cm2,max_current_density_ma_cm2,voltage_v,lifetime_h,lifetime_is_lower_bound,source\n\
                   bad,respiration,0.5,lots,,,,x\n";
        assert!(matches!(
            ingest_records(csv.as_bytes()),
            Err(Error::Ingest { line: 2, .. })
        ));
    }

    #[test]
    fn ingest_rejects_wrong_header() {
        let csv = "label,kind,power,current\nbad,respiration,0.5,1.5\n";
        match ingest_records(csv.as_bytes()) {
            Err(Error::Ingest { line: 1, column, .. }) => assert_eq!(column, "<header>"),
            other => panic!("expected header error, got {other:?}"),
        }
    }

    #[test]
    fn scatter_series_keyed_by_kind() {
        let dataset = emit_scatter(&builtin_records()).unwrap();
        assert_eq!(dataset.respiration.len(), 2);
        assert!(dataset.photosynthetic.is_empty());
        assert_eq!(dataset.respiration[0].x, 3.1);
        assert_eq!(dataset.respiration[0].y, 0.91);
        assert_eq!(dataset.respiration[1].x, 6.42);
        assert_eq!(dataset.respiration[1].y, 1.21);
    }

    #[test]
    fn scatter_preserves_duplicates_and_rejects_empty() {
        let mut records = builtin_records();
        records.push(records[0].clone());
        let dataset = emit_scatter(&records).unwrap();
        assert_eq!(dataset.respiration.len(), 3);
        assert_eq!(dataset.respiration[0], dataset.respiration[2]);
        assert!(matches!(emit_scatter(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn scatter_csv_and_svg_emission() {
        let dataset = emit_scatter(&builtin_records()).unwrap();
        let mut buf = Vec::new();
        write_scatter_csv(&dataset, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("kind,label,max_current_density_ma_cm2,max_power_density_mw_cm2\n"));
        assert!(text.contains("respiration,PET-nanochannel biocell,3.1,0.91"));
        assert!(text.contains("respiration,SPEEK-fiber biocell,6.42,1.21"));
        let svg = scatter_svg(&dataset);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("circle"));
    }
}
