//! Feature matrix CSV and the schema JSON sidecar.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::compound::Popularity;
use crate::{Error, Result};

use super::{Column, ComboKeys, ComboSchema, FeatureSchema, ObservationConfig, RawFeatures, BASE_FEATURES, NE_SLOTS, POS_SLOTS};

/// Leading identity columns and trailing raw-combination columns around the
/// schema's feature columns.
const ID_COLUMNS: [&str; 2] = ["compound", "t0"];
const TAIL_COLUMNS: [&str; 3] = ["pos_pair", "ne_pair", "label"];

/// Featurized candidates with their schema and optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub schema: FeatureSchema,
    pub rows: Vec<RawFeatures>,
    pub labels: Vec<Option<Popularity>>,
}

fn label_cell(l: Option<Popularity>) -> &'static str {
    match l {
        Some(Popularity::Popular) => "1",
        Some(Popularity::Unpopular) => "0",
        None => "",
    }
}

pub fn write_feature_csv<W: Write>(w: W, table: &FeatureTable) -> Result<()> {
    if table.rows.len() != table.labels.len() {
        return Err(Error::invalid("rows and labels differ in length"));
    }
    let mut out = csv::Writer::from_writer(w);
    let header: Vec<&str> = ID_COLUMNS
        .into_iter()
        .chain(table.schema.columns().iter().map(|c| c.name.as_str()))
        .chain(TAIL_COLUMNS)
        .collect();
    out.write_record(&header)?;
    for (row, label) in table.rows.iter().zip(&table.labels) {
        let mut rec = vec![row.compound.clone(), row.t0.to_string()];
        rec.extend(table.schema.values(row).iter().map(|v| v.to_string()));
        rec.extend([row.keys.pos_pair.clone(), row.keys.ne_pair.clone(), label_cell(*label).to_string()]);
        out.write_record(&rec)?;
    }
    out.flush().map_err(|e| Error::io("<feature csv>", e))?;
    Ok(())
}

fn schema_from_header(names: &[&str]) -> Result<ComboSchema> {
    let base: Vec<&str> = BASE_FEATURES.iter().map(|f| f.0).collect();
    if names.len() != base.len() + POS_SLOTS + NE_SLOTS || names[..base.len()] != base[..] {
        return Err(Error::Schema("feature columns do not match the base layout".into()));
    }
    let slots = |prefix: &str, cols: &[&str]| -> Result<Vec<Option<String>>> {
        cols.iter()
            .enumerate()
            .map(|(i, c)| {
                let rest = c
                    .strip_prefix(prefix)
                    .ok_or_else(|| Error::Schema(format!("expected a {prefix} column, found {c}")))?;
                Ok(if rest == format!("slot{:02}", i + 1) { None } else { Some(rest.to_string()) })
            })
            .collect()
    };
    let combo = &names[base.len()..];
    Ok(ComboSchema {
        pos_pairs: slots("pos:", &combo[..POS_SLOTS])?,
        ne_pairs: slots("ne:", &combo[POS_SLOTS..])?,
    })
}

pub fn read_feature_csv<R: Read>(r: R) -> Result<FeatureTable> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    let names: Vec<&str> = header.iter().collect();
    let n = names.len();
    if n < ID_COLUMNS.len() + TAIL_COLUMNS.len()
        || names[..2] != ID_COLUMNS[..]
        || names[n - 3..] != TAIL_COLUMNS[..]
    {
        return Err(Error::Schema("feature CSV header lacks identity or label columns".into()));
    }
    let schema = FeatureSchema::new(schema_from_header(&names[2..n - 3])?);
    let nb = BASE_FEATURES.len();
    let oov = BASE_FEATURES.iter().position(|f| f.0 == "zone:OOV-OOV").expect("zone columns");

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let bad = |m: String| Error::Format(format!("feature CSV row {}: {m}", line + 2));
        let num = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|e| bad(format!("column {}: {e}", names[i])))
        };
        let base = (2..2 + nb).map(num).collect::<Result<Vec<f64>>>()?;
        let zone = &base[oov..oov + 4];
        let slot = zone
            .iter()
            .position(|&v| v == 1.0)
            .filter(|_| zone.iter().sum::<f64>() == 1.0)
            .ok_or_else(|| bad("OOV/INV columns must have exactly one bit set".into()))?;
        let keys = ComboKeys {
            pos_pair: rec[n - 3].to_string(),
            ne_pair: rec[n - 2].to_string(),
            a_inv: slot == 1 || slot == 3,
            b_inv: slot >= 2,
        };
        let bits = (2 + nb..n - 3).map(num).collect::<Result<Vec<f64>>>()?;
        if bits != schema.combo.slot_bits(&keys) {
            return Err(bad("combination bits disagree with pos_pair/ne_pair".into()));
        }
        labels.push(match &rec[n - 1] {
            "" => None,
            "1" => Some(Popularity::Popular),
            "0" => Some(Popularity::Unpopular),
            other => return Err(bad(format!("bad label {other:?}"))),
        });
        rows.push(RawFeatures {
            compound: rec[0].to_string(),
            t0: rec[1].parse().map_err(|e| bad(format!("t0: {e}")))?,
            base,
            keys,
            warnings: vec![],
        });
    }
    Ok(FeatureTable { schema, rows, labels })
}

/// JSON sidecar describing a feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaFile {
    pub format: String,
    pub version: u32,
    pub schema_id: String,
    pub features: Vec<Column>,
    pub combo: ComboSchema,
    pub config: ObservationConfig,
}

impl SchemaFile {
    pub fn new(schema: &FeatureSchema, config: ObservationConfig) -> Self {
        SchemaFile {
            format: "hashmerge-features".into(),
            version: 1,
            schema_id: schema.id().to_string(),
            features: schema.columns().to_vec(),
            combo: schema.combo.clone(),
            config,
        }
    }

    pub fn schema(&self) -> Result<FeatureSchema> {
        let s = FeatureSchema::new(self.combo.clone());
        if s.id() != self.schema_id || s.columns() != &self.features[..] {
            return Err(Error::Schema("schema sidecar is inconsistent".into()));
        }
        Ok(s)
    }
}
