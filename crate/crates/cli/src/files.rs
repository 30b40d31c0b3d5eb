//! On-disk formats: params files, share files and structure files.
//!
//! The native format is line-oriented UTF-8 with one `key: value` pair per
//! line and Gaussian integers in their `a+bi` text form. Every file can
//! also be written as JSON (`--json`); readers detect the format from the
//! first byte. Share files carry the first 16 hex chars of the SHA-256 of
//! the canonical params serialization, so shares from different schemes
//! cannot be mixed silently.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use gmss::gint::{DomainKind, GaussianInt};
use gmss::scheme::{SchemeParams, Share};

pub const PARAMS_HEADER: &str = "gmss-params v1";
pub const SHARE_HEADER: &str = "gmss-share v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileError(String);

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FileError {}

fn bad(msg: impl Into<String>) -> FileError {
    FileError(msg.into())
}

/// A params file: the scheme parameters plus optional provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamsFile {
    pub params: SchemeParams,
    /// Free-form note about how the parameters were produced.
    pub generator: Option<String>,
    pub seed: Option<u64>,
}

impl ParamsFile {
    /// The digest input: moduli and bounds only, so provenance edits do not
    /// orphan existing shares.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{PARAMS_HEADER}");
        for m in &self.params.moduli {
            let _ = writeln!(out, "modulus: {m}");
        }
        let _ = writeln!(out, "m-minus: {}", self.params.m_minus);
        let _ = writeln!(out, "m-plus: {}", self.params.m_plus);
        out
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical_text().as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in &hash[..8] {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }

    pub fn to_text(&self) -> String {
        let mut out = self.canonical_text();
        if let Some(generator) = &self.generator {
            let _ = writeln!(out, "generator: {generator}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut value = json!({
            "format": "gmss-params",
            "version": 1,
            "moduli": self.params.moduli.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "m_minus": self.params.m_minus.to_string(),
            "m_plus": self.params.m_plus.to_string(),
        });
        if let Some(generator) = &self.generator {
            value["generator"] = json!(generator);
        }
        if let Some(seed) = self.seed {
            value["seed"] = json!(seed);
        }
        let mut text = value.to_string();
        text.push('\n');
        text
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            self.to_json()
        } else {
            self.to_text()
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    fn parse_text(text: &str) -> Result<Self, FileError> {
        let mut lines = non_blank_lines(text);
        let header = lines.next().ok_or_else(|| bad("empty params file"))?;
        if header.trim() != PARAMS_HEADER {
            return Err(bad(format!(
                "expected `{PARAMS_HEADER}` header, got `{header}`"
            )));
        }
        let mut moduli = Vec::new();
        let mut m_minus = None;
        let mut m_plus = None;
        let mut generator = None;
        let mut seed = None;
        for line in lines {
            let (key, value) = split_key_value(line)?;
            match key {
                "modulus" => moduli.push(parse_nonzero_gint(value)?),
                "m-minus" => m_minus = Some(parse_positive_int(value, "m-minus")?),
                "m-plus" => m_plus = Some(parse_positive_int(value, "m-plus")?),
                "generator" => generator = Some(value.to_string()),
                "seed" => {
                    seed = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad seed `{value}`")))?,
                    )
                }
                other => return Err(bad(format!("unknown params key `{other}`"))),
            }
        }
        finish_params(moduli, m_minus, m_plus, generator, seed)
    }

    fn parse_json(text: &str) -> Result<Self, FileError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
        expect_format(&value, "gmss-params")?;
        let moduli = value["moduli"]
            .as_array()
            .ok_or_else(|| bad("`moduli` must be an array"))?
            .iter()
            .map(|m| parse_nonzero_gint(m.as_str().unwrap_or_default()))
            .collect::<Result<Vec<_>, _>>()?;
        let m_minus = parse_positive_int(json_str(&value, "m_minus")?, "m_minus")?;
        let m_plus = parse_positive_int(json_str(&value, "m_plus")?, "m_plus")?;
        let generator = value["generator"].as_str().map(str::to_string);
        let seed = value["seed"].as_u64();
        finish_params(moduli, Some(m_minus), Some(m_plus), generator, seed)
    }
}

fn finish_params(
    moduli: Vec<GaussianInt>,
    m_minus: Option<BigInt>,
    m_plus: Option<BigInt>,
    generator: Option<String>,
    seed: Option<u64>,
) -> Result<ParamsFile, FileError> {
    if moduli.is_empty() {
        return Err(bad("params file lists no moduli"));
    }
    let m_minus = m_minus.ok_or_else(|| bad("missing m-minus"))?;
    let m_plus = m_plus.ok_or_else(|| bad("missing m-plus"))?;
    Ok(ParamsFile {
        params: SchemeParams {
            moduli,
            m_minus,
            m_plus,
        },
        generator,
        seed,
    })
}

/// A share file: one participant's share bound to its params digest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareFile {
    pub params_digest: String,
    pub share: Share,
}

impl ShareFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SHARE_HEADER}");
        let _ = writeln!(out, "params-digest: {}", self.params_digest);
        let _ = writeln!(out, "index: {}", self.share.index);
        let _ = writeln!(out, "modulus: {}", self.share.modulus);
        let _ = writeln!(out, "residue: {}", self.share.residue);
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = json!({
            "format": "gmss-share",
            "version": 1,
            "params_digest": self.params_digest,
            "index": self.share.index,
            "modulus": self.share.modulus.to_string(),
            "residue": self.share.residue.to_string(),
        })
        .to_string();
        text.push('\n');
        text
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            self.to_json()
        } else {
            self.to_text()
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    fn parse_text(text: &str) -> Result<Self, FileError> {
        let mut lines = non_blank_lines(text);
        let header = lines.next().ok_or_else(|| bad("empty share file"))?;
        if header.trim() != SHARE_HEADER {
            return Err(bad(format!(
                "expected `{SHARE_HEADER}` header, got `{header}`"
            )));
        }
        let mut digest = None;
        let mut index = None;
        let mut modulus = None;
        let mut residue = None;
        for line in lines {
            let (key, value) = split_key_value(line)?;
            match key {
                "params-digest" => digest = Some(value.to_string()),
                "index" => {
                    index = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad index `{value}`")))?,
                    )
                }
                "modulus" => modulus = Some(parse_nonzero_gint(value)?),
                "residue" => residue = Some(parse_gint(value)?),
                other => return Err(bad(format!("unknown share key `{other}`"))),
            }
        }
        finish_share(digest, index, modulus, residue)
    }

    fn parse_json(text: &str) -> Result<Self, FileError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
        expect_format(&value, "gmss-share")?;
        let digest = json_str(&value, "params_digest")?.to_string();
        let index = value["index"]
            .as_u64()
            .ok_or_else(|| bad("`index` must be a positive integer"))? as usize;
        let modulus = parse_nonzero_gint(json_str(&value, "modulus")?)?;
        let residue = parse_gint(json_str(&value, "residue")?)?;
        finish_share(Some(digest), Some(index), Some(modulus), Some(residue))
    }
}

fn finish_share(
    digest: Option<String>,
    index: Option<usize>,
    modulus: Option<GaussianInt>,
    residue: Option<GaussianInt>,
) -> Result<ShareFile, FileError> {
    let params_digest = digest.ok_or_else(|| bad("missing params-digest"))?;
    let index = index.ok_or_else(|| bad("missing index"))?;
    if index == 0 {
        return Err(bad("share index must be 1-based"));
    }
    let modulus = modulus.ok_or_else(|| bad("missing modulus"))?;
    let residue = residue.ok_or_else(|| bad("missing residue"))?;
    if !residue.in_domain(&modulus, DomainKind::HalfOpen) {
        return Err(bad(format!(
            "residue {residue} is not the principal value of any secret modulo {modulus}"
        )));
    }
    Ok(ShareFile {
        params_digest,
        share: Share {
            index,
            modulus,
            residue,
        },
    })
}

/// Structure file: one minimal coalition per line as comma-separated
/// 1-based indices. Returns the coalitions; the participant count is the
/// caller's business.
pub fn parse_structure(text: &str) -> Result<Vec<Vec<usize>>, FileError> {
    let mut coalitions = Vec::new();
    for line in non_blank_lines(text) {
        let members = line
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<usize>()
                    .ok()
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| bad(format!("bad participant index `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        coalitions.push(members);
    }
    if coalitions.is_empty() {
        return Err(bad("structure file lists no coalitions"));
    }
    Ok(coalitions)
}

fn non_blank_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty())
}

fn split_key_value(line: &str) -> Result<(&str, &str), FileError> {
    line.split_once(':')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| bad(format!("expected `key: value`, got `{line}`")))
}

fn parse_gint(text: &str) -> Result<GaussianInt, FileError> {
    GaussianInt::from_str(text).map_err(|e| bad(e.to_string()))
}

fn parse_nonzero_gint(text: &str) -> Result<GaussianInt, FileError> {
    let z = parse_gint(text)?;
    if z.is_zero() {
        return Err(bad("modulus must be nonzero"));
    }
    Ok(z)
}

fn parse_positive_int(text: &str, key: &str) -> Result<BigInt, FileError> {
    let value: BigInt = text
        .parse()
        .map_err(|_| bad(format!("bad integer for {key}: `{text}`")))?;
    if !value.is_positive() {
        return Err(bad(format!("{key} must be positive, got {value}")));
    }
    Ok(value)
}

fn expect_format(value: &Value, expected: &str) -> Result<(), FileError> {
    let format = value["format"].as_str().unwrap_or_default();
    if format != expected {
        return Err(bad(format!("expected format `{expected}`, got `{format}`")));
    }
    Ok(())
}

fn json_str<'a>(value: &'a Value, key: &str) -> Result<&'a str, FileError> {
    value[key]
        .as_str()
        .ok_or_else(|| bad(format!("`{key}` must be a string")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_params() -> ParamsFile {
        let params = SchemeParams::new(
            vec![
                GaussianInt::new(15, 14),
                GaussianInt::new(10, -18),
                GaussianInt::new(13, 16),
            ],
            425,
            178504,
        );
        ParamsFile {
            params,
            generator: Some("threshold t=2 n=3".to_string()),
            seed: Some(7),
        }
    }

    #[test]
    fn params_text_round_trip() {
        let file = sample_params();
        assert_eq!(ParamsFile::parse(&file.to_text()).unwrap(), file);
        assert_eq!(ParamsFile::parse(&file.to_json()).unwrap(), file);
    }

    #[test]
    fn digest_ignores_provenance() {
        let with = sample_params();
        let without = ParamsFile {
            params: with.params.clone(),
            generator: None,
            seed: None,
        };
        assert_eq!(with.digest(), without.digest());
        assert_eq!(with.digest().len(), 16);

        let mut other = without.clone();
        other.params.m_minus = BigInt::from(426);
        assert_ne!(other.digest(), with.digest());
    }

    #[test]
    fn params_parse_rejects_junk() {
        assert!(ParamsFile::parse("").is_err());
        assert!(ParamsFile::parse("gmss-params v1\n").is_err());
        assert!(ParamsFile::parse("nope\nmodulus: 1+i\n").is_err());
        let zero = "gmss-params v1\nmodulus: 0\nm-minus: 1\nm-plus: 10\n";
        assert!(ParamsFile::parse(zero).is_err());
        let negative = "gmss-params v1\nmodulus: 1+i\nm-minus: -4\nm-plus: 10\n";
        assert!(ParamsFile::parse(negative).is_err());
    }

    #[test]
    fn structure_parsing() {
        assert_eq!(
            parse_structure("1,3\n2,3\n").unwrap(),
            vec![vec![1, 3], vec![2, 3]]
        );
        assert_eq!(parse_structure(" 1 , 2 \n\n").unwrap(), vec![vec![1, 2]]);
        assert!(parse_structure("").is_err());
        assert!(parse_structure("0,1\n").is_err());
        assert!(parse_structure("1,x\n").is_err());
    }

    fn arb_gint() -> impl Strategy<Value = GaussianInt> {
        (any::<i64>(), any::<i64>()).prop_map(|(re, im)| GaussianInt::new(re, im))
    }

    proptest! {
        #[test]
        fn share_files_round_trip(
            re in any::<i64>(),
            im in any::<i64>(),
            modulus in arb_gint().prop_filter("nonzero", |z| !z.is_zero()),
            index in 1usize..10_000,
            digest in "[0-9a-f]{16}",
        ) {
            let residue = GaussianInt::new(re, im).mod_principal(&modulus);
            let file = ShareFile {
                params_digest: digest,
                share: Share { index, modulus, residue },
            };
            prop_assert_eq!(ShareFile::parse(&file.to_text()).unwrap(), file.clone());
            prop_assert_eq!(ShareFile::parse(&file.to_json()).unwrap(), file);
        }
    }

    #[test]
    fn share_parse_rejects_non_principal_residue() {
        // -1 is congruent to 1 modulo 2 but lies outside F(2)
        let text = "gmss-share v1\nparams-digest: 0000000000000000\n\
                    index: 1\nmodulus: 2\nresidue: -1\n";
        assert!(ShareFile::parse(text).is_err());
    }
}
