use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulation and coding scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModCod {
    pub name: String,
    /// Spectral efficiency in bit/s/Hz.
    pub spectral_efficiency: f64,
    /// Required energy per bit over noise density, dB.
    pub ebn0_db: f64,
}

/// MODCOD entries with strictly increasing spectral efficiency and
/// non-decreasing required Eb/N0.
#[derive(Debug, Clone, PartialEq)]
pub struct ModCodTable {
    entries: Vec<ModCod>,
}

// name, spectral efficiency, Eb/N0 (dB). Values follow the DVB-S2/S2X
// quasi-error-free thresholds, adjusted so that Eb/N0 never decreases.
const DEFAULT_TABLE: [(&str, f64, f64); 12] = [
    ("QPSK 1/4", 0.50, 0.75),
    ("QPSK 1/2", 0.99, 1.05),
    ("QPSK 2/3", 1.32, 1.89),
    ("QPSK 3/4", 1.49, 2.31),
    ("QPSK 5/6", 1.65, 2.99),
    ("8PSK 2/3", 1.98, 3.65),
    ("8PSK 5/6", 2.48, 5.41),
    ("16APSK 3/4", 2.97, 5.49),
    ("16APSK 9/10", 3.56, 7.62),
    ("32APSK 4/5", 3.95, 7.67),
    ("32APSK 9/10", 4.45, 9.57),
    ("64APSK 5/6", 5.50, 11.20),
];

impl ModCodTable {
    pub fn new(entries: Vec<ModCod>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Configuration("MODCOD table is empty".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if !(e.spectral_efficiency > 0.0) || !e.spectral_efficiency.is_finite() {
                return Err(Error::Configuration(format!("MODCOD `{}`: spectral efficiency must be positive", e.name)));
            }
            if !e.ebn0_db.is_finite() {
                return Err(Error::Configuration(format!("MODCOD `{}`: Eb/N0 must be finite", e.name)));
            }
            if i > 0 {
                let prev = &entries[i - 1];
                if e.spectral_efficiency <= prev.spectral_efficiency {
                    return Err(Error::Configuration(format!(
                        "MODCOD `{}`: spectral efficiency must increase strictly",
                        e.name
                    )));
                }
                if e.ebn0_db < prev.ebn0_db {
                    return Err(Error::Configuration(format!("MODCOD `{}`: Eb/N0 must not decrease", e.name)));
                }
            }
        }
        Ok(ModCodTable { entries })
    }

    /// Twelve-entry table spanning 0.5 to 5.5 bit/s/Hz.
    pub fn dvb_s2_default() -> Self {
        let entries = DEFAULT_TABLE
            .iter()
            .map(|&(name, se, eb)| ModCod { name: name.to_string(), spectral_efficiency: se, ebn0_db: eb })
            .collect();
        ModCodTable::new(entries).expect("default MODCOD table is well-formed")
    }

    pub fn entries(&self) -> &[ModCod] {
        &self.entries
    }

    pub fn max_spectral_efficiency(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.spectral_efficiency)
    }

    /// Lowest-efficiency entry with `spectral_efficiency >= gamma_req`.
    pub fn select(&self, gamma_req: f64) -> Option<&ModCod> {
        let idx = self.entries.partition_point(|e| e.spectral_efficiency < gamma_req);
        self.entries.get(idx)
    }

    /// Reads `name,spectral_efficiency,ebn0_db` rows with a header.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let entries = r
            .deserialize::<ModCod>()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("MODCOD table: {e}")))?;
        ModCodTable::new(entries)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for e in &self.entries {
            w.serialize(e)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn select_modcod(table: &ModCodTable, gamma_req: f64) -> Option<&ModCod> {
    table.select(gamma_req)
}
