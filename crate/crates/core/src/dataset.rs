//! Country panels behind the two wage regressions.
//!
//! The embedded panel holds 16 receiving countries and 12 EPS sending
//! countries with 2019 industry shares (% of GDP) and manufacturing monthly
//! wages in 2017 PPP dollars. Korea appears twice: as a receiving country
//! and as the baseline that sending-country wages are differenced against.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// SHA-256 of the embedded panel in canonical CSV form.
pub const EMBEDDED_SHA256: &str = "bcbf8f0c9ab55157093829fb16dcb75292054be185ead55d76f57413f7651154";

pub const CSV_HEADER: [&str; 6] = [
    "code",
    "role",
    "industry_share",
    "wage_total",
    "wage_men",
    "wage_women",
];

#[derive(Debug, Error)]
pub enum DataError {
    #[error("data integrity: {0}")]
    Integrity(String),
    #[error("invalid record {code}: {reason}")]
    InvalidRecord { code: String, reason: String },
    #[error("log argument for {code} is not positive ({value})")]
    NonpositiveLogArgument { code: String, value: f64 },
    #[error("sample for {0} has too few points ({1})")]
    TooFewPoints(Hypothesis, usize),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Receiving,
    Sending,
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    /// Receiving countries: log10 wage against industry share.
    H1,
    /// Sending countries: log10 of the Korea wage gap against industry share.
    H2,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::H1 => "h1",
            Hypothesis::H2 => "h2",
        })
    }
}

impl FromStr for Hypothesis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h1" => Ok(Hypothesis::H1),
            "h2" => Ok(Hypothesis::H2),
            other => Err(format!("unknown hypothesis '{other}' (expected h1 or h2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Total,
    Men,
    Women,
}

impl Gender {
    pub const ALL: [Gender; 3] = [Gender::Total, Gender::Men, Gender::Women];
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Total => "total",
            Gender::Men => "men",
            Gender::Women => "women",
        })
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "total" => Ok(Gender::Total),
            "men" => Ok(Gender::Men),
            "women" => Ok(Gender::Women),
            other => Err(format!("unknown gender '{other}' (expected total, men or women)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryRecord {
    pub code: String,
    pub role: Role,
    pub industry_share: f64,
    pub wage_total: f64,
    pub wage_men: f64,
    pub wage_women: f64,
}

impl CountryRecord {
    fn new(code: &str, role: Role, share: f64, total: f64, men: f64, women: f64) -> Self {
        Self {
            code: code.to_string(),
            role,
            industry_share: share,
            wage_total: total,
            wage_men: men,
            wage_women: women,
        }
    }

    pub fn wage(&self, g: Gender) -> f64 {
        match g {
            Gender::Total => self.wage_total,
            Gender::Men => self.wage_men,
            Gender::Women => self.wage_women,
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let bad = |reason: String| DataError::InvalidRecord {
            code: self.code.clone(),
            reason,
        };
        if self.code.len() != 3 || !self.code.chars().all(|c| c.is_ascii_uppercase()) {
            return Err(bad("code must be three uppercase ASCII letters".into()));
        }
        if !(self.industry_share > 0.0 && self.industry_share < 100.0) {
            return Err(bad(format!(
                "industry share {} outside (0, 100)",
                self.industry_share
            )));
        }
        for g in Gender::ALL {
            let w = self.wage(g);
            if !(w.is_finite() && w > 0.0) {
                return Err(bad(format!("{g} wage {w} must be positive")));
            }
        }
        if self.wage_men < self.wage_women {
            return Err(bad(format!(
                "men's wage {} below women's wage {}",
                self.wage_men, self.wage_women
            )));
        }
        Ok(())
    }
}

/// A receiving panel, a sending panel and the baseline country.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub receiving: Vec<CountryRecord>,
    pub sending: Vec<CountryRecord>,
    pub baseline: CountryRecord,
}

#[rustfmt::skip]
fn embedded_records() -> Vec<CountryRecord> {
    use Role::*;
    let r = CountryRecord::new;
    vec![
        r("USA", Receiving, 18.3, 4778.4, 5081.0, 4031.1),
        r("CAN", Receiving, 24.6, 3611.2, 3811.8, 3101.3),
        r("AUS", Receiving, 25.3, 3743.8, 4105.1, 2906.3),
        r("GBR", Receiving, 18.0, 3658.3, 3889.4, 2893.0),
        r("FRA", Receiving, 17.4, 3381.2, 3534.7, 2976.2),
        r("DEU", Receiving, 27.0, 4812.7, 5112.4, 3847.8),
        r("SWE", Receiving, 21.9, 3914.8, 3956.6, 3810.4),
        r("NOR", Receiving, 29.0, 4630.1, 4707.6, 4346.9),
        r("FIN", Receiving, 23.9, 3799.7, 3897.1, 3512.9),
        r("ITA", Receiving, 21.5, 3942.3, 4239.9, 3164.4),
        r("GRC", Receiving, 13.3, 1343.8, 1399.5, 1210.3),
        r("ESP", Receiving, 20.1, 3239.6, 3433.7, 3194.4),
        r("KOR", Receiving, 32.7, 4073.0, 4411.7, 2992.1),
        r("JPN", Receiving, 28.6, 2586.3, 2802.1, 1908.0),
        r("HKG", Receiving, 6.1,  2383.5, 2542.4, 1779.7),
        r("SGP", Receiving, 24.1, 4778.4, 4786.0, 3946.0),
        r("PHL", Sending, 30.3,  673.2,  692.7,  641.1),
        r("MNG", Sending, 38.1,  1220.0, 1316.8, 1104.7),
        r("LKA", Sending, 27.2,  537.5,  658.8,  409.0),
        r("VNM", Sending, 33.72, 830.4,  902.0,  774.2),
        r("THA", Sending, 33.6,  1123.1, 1198.5, 1037.1),
        r("PAK", Sending, 19.6,  529.4,  571.7,  221.4),
        r("KHM", Sending, 34.2,  687.2,  705.7,  678.0),
        r("CHN", Sending, 38.6,  1207.8, 1356.36, 1059.24),
        r("BGD", Sending, 32.9,  382.5,  406.0,  331.8),
        r("NPL", Sending, 13.0,  571.5,  601.6,  401.1),
        r("TLS", Sending, 30.2,  770.1,  838.0,  556.0),
        r("LAO", Sending, 31.5,  583.2,  703.1,  479.6),
        r("KOR", Baseline, 32.7, 4073.0, 4411.7, 2992.1),
    ]
}

impl Panel {
    /// The embedded panel, checked against its stored digest.
    pub fn embedded() -> Result<Self, DataError> {
        let panel = Self::from_records(embedded_records())?;
        let digest = panel.sha256()?;
        if digest != EMBEDDED_SHA256 {
            return Err(DataError::Integrity(format!(
                "embedded panel digest {digest} does not match {EMBEDDED_SHA256}"
            )));
        }
        Ok(panel)
    }

    /// Groups records by role. Requires exactly one baseline row.
    pub fn from_records(records: Vec<CountryRecord>) -> Result<Self, DataError> {
        let mut receiving = Vec::new();
        let mut sending = Vec::new();
        let mut baseline = None;
        for rec in records {
            rec.validate()?;
            match rec.role {
                Role::Receiving => receiving.push(rec),
                Role::Sending => sending.push(rec),
                Role::Baseline => {
                    if baseline.is_some() {
                        return Err(DataError::Integrity("more than one baseline row".into()));
                    }
                    baseline = Some(rec);
                }
            }
        }
        let baseline = baseline.ok_or_else(|| DataError::Integrity("no baseline row".into()))?;
        Ok(Self {
            receiving,
            sending,
            baseline,
        })
    }

    pub fn records(&self) -> impl Iterator<Item = &CountryRecord> {
        self.receiving
            .iter()
            .chain(self.sending.iter())
            .chain(std::iter::once(&self.baseline))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, DataError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(DataError::Integrity(format!(
                "unexpected header '{}' (expected '{}')",
                header.iter().collect::<Vec<_>>().join(","),
                CSV_HEADER.join(",")
            )));
        }
        let records = rdr.deserialize().collect::<Result<Vec<CountryRecord>, _>>()?;
        Self::from_records(records)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, DataError> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut wtr = csv::Writer::from_writer(writer);
        for rec in self.records() {
            wtr.serialize(rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, DataError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| DataError::Integrity(e.to_string()))
    }

    pub fn sha256(&self) -> Result<String, DataError> {
        let digest = Sha256::digest(self.to_csv_string()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// The 16 receiving countries in appendix order.
pub fn load_receiving() -> Result<Vec<CountryRecord>, DataError> {
    Ok(Panel::embedded()?.receiving)
}

/// The 12 sending countries in appendix order, followed by the Korea baseline.
pub fn load_sending() -> Result<Vec<CountryRecord>, DataError> {
    let panel = Panel::embedded()?;
    let mut out = panel.sending;
    out.push(panel.baseline);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionSample {
    pub hypothesis: Hypothesis,
    pub gender: Gender,
    /// Industry share, % of GDP.
    pub x: Vec<f64>,
    /// log10 of the dependent variable.
    pub y: Vec<f64>,
    /// The dependent variable before the log transform.
    pub y_raw: Vec<f64>,
    pub labels: Vec<String>,
}

impl RegressionSample {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// H1: `log10(wage)` of each receiving country (hypothetical sending wage
/// k = 0). H2: `log10(baseline wage - sending wage)`.
pub fn build_sample(panel: &Panel, h: Hypothesis, g: Gender) -> Result<RegressionSample, DataError> {
    let rows = match h {
        Hypothesis::H1 => &panel.receiving,
        Hypothesis::H2 => &panel.sending,
    };
    let mut sample = RegressionSample {
        hypothesis: h,
        gender: g,
        x: Vec::with_capacity(rows.len()),
        y: Vec::with_capacity(rows.len()),
        y_raw: Vec::with_capacity(rows.len()),
        labels: Vec::with_capacity(rows.len()),
    };
    for rec in rows {
        let raw = match h {
            Hypothesis::H1 => rec.wage(g),
            Hypothesis::H2 => panel.baseline.wage(g) - rec.wage(g),
        };
        if raw.is_nan() || raw <= 0.0 {
            return Err(DataError::NonpositiveLogArgument {
                code: rec.code.clone(),
                value: raw,
            });
        }
        sample.x.push(rec.industry_share);
        sample.y.push(raw.log10());
        sample.y_raw.push(raw);
        sample.labels.push(rec.code.clone());
    }
    if sample.len() < 3 {
        return Err(DataError::TooFewPoints(h, sample.len()));
    }
    Ok(sample)
}
