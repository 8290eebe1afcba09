//! Plain-text key=value configuration for materials and geometry.
//!
//! Lines are `key = value`; `#` starts a comment; keys are
//! case-insensitive. Example material file:
//!
//! ```text
//! material = holzapfel
//! c10 = 2.212e4
//! d = 1e-6
//! k1 = 206
//! k2 = 1.465
//! fiber_angle_deg = 39.76
//! ```

use crate::error::{Error, Result};
use crate::inflation::CylinderGeometry;
use crate::materials::{Holzapfel, NeoHookean};
use std::collections::BTreeMap;
use std::path::Path;

/// A configured material.
#[derive(Clone, Copy, Debug)]
pub enum MaterialConfig {
    NeoHookean(NeoHookean),
    Holzapfel(Holzapfel),
}

impl MaterialConfig {
    pub fn label(&self) -> &'static str {
        match self {
            MaterialConfig::NeoHookean(_) => "neo-hookean",
            MaterialConfig::Holzapfel(_) => "holzapfel",
        }
    }
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                line_no + 1
            )));
        };
        map.insert(
            key.trim().to_ascii_lowercase(),
            value.trim().to_string(),
        );
    }
    Ok(map)
}

fn number(map: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let raw = map
        .get(key)
        .ok_or_else(|| Error::Config(format!("missing key `{key}`")))?;
    raw.parse::<f64>()
        .map_err(|_| Error::Config(format!("key `{key}`: `{raw}` is not a number")))
}

fn number_or(map: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match map.get(key) {
        Some(raw) => raw
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("key `{key}`: `{raw}` is not a number"))),
        None => Ok(default),
    }
}

/// Parses a material description.
pub fn parse_material(text: &str) -> Result<MaterialConfig> {
    let map = parse_pairs(text)?;
    let name = map
        .get("material")
        .ok_or_else(|| Error::Config("missing key `material`".into()))?
        .to_ascii_lowercase();
    match name.as_str() {
        "neo-hookean" | "neohookean" => {
            let m = NeoHookean::new(number(&map, "c10")?, number(&map, "d")?)
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(MaterialConfig::NeoHookean(m))
        }
        "holzapfel" => {
            let m = Holzapfel::with_fiber_angle_deg(
                number(&map, "c10")?,
                number(&map, "d")?,
                number(&map, "k1")?,
                number(&map, "k2")?,
                number(&map, "fiber_angle_deg")?,
            )
            .map_err(|e| Error::Config(e.to_string()))?;
            Ok(MaterialConfig::Holzapfel(m))
        }
        other => Err(Error::Config(format!(
            "unknown material `{other}` (expected neo-hookean or holzapfel)"
        ))),
    }
}

pub fn load_material(path: &Path) -> Result<MaterialConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_material(&text)
}

/// Parses a cylinder geometry description with keys `inner_radius`,
/// `outer_radius` and optional `axial_stretch` (default 1).
pub fn parse_geometry(text: &str) -> Result<CylinderGeometry> {
    let map = parse_pairs(text)?;
    CylinderGeometry::new(
        number(&map, "inner_radius")?,
        number(&map, "outer_radius")?,
        number_or(&map, "axial_stretch", 1.0)?,
    )
    .map_err(|e| Error::Config(e.to_string()))
}

pub fn load_geometry(path: &Path) -> Result<CylinderGeometry> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_geometry(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_neo_hookean() {
        let cfg = parse_material("material = neo-hookean\nc10 = 8e4\nd = 2e-6\n").unwrap();
        match cfg {
            MaterialConfig::NeoHookean(m) => {
                assert_eq!(m.c10, 8e4);
                assert_eq!(m.d, 2e-6);
            }
            _ => panic!("wrong material"),
        }
    }

    #[test]
    fn parses_holzapfel_with_comments() {
        let text = "# artery wall\nmaterial = holzapfel\nc10 = 2.212e4\nd = 1e-6\nk1 = 206\nk2 = 1.465\nfiber_angle_deg = 39.76\n";
        let cfg = parse_material(text).unwrap();
        match cfg {
            MaterialConfig::Holzapfel(m) => {
                assert_eq!(m.k1, 206.0);
                assert!((m.a0[1] - 39.76f64.to_radians().cos()).abs() < 1e-15);
            }
            _ => panic!("wrong material"),
        }
    }

    #[test]
    fn missing_key_is_a_config_error() {
        let err = parse_material("material = neo-hookean\nc10 = 8e4\n").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = parse_material("material = neo-hookean\nc10 8e4\nd = 2e-6\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn parses_geometry_with_default_axial_stretch() {
        let g = parse_geometry("inner_radius = 0.4\nouter_radius = 0.5\n").unwrap();
        assert_eq!(g.axial_stretch, 1.0);
    }
}
