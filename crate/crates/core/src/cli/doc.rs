//! JSON documents. Integers are decimal strings (plain JSON integers are
//! accepted on input); a homomorphism matrix is listed by rows, one row per
//! target generator, so that images of source generators are its columns.

use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factorization::{Evidence, LevelMap};
use crate::fgab::{FgAbGroup, Homomorphism, IntMatrix};
use crate::grid::{FinSetGrid, Grid, RawInvMorphismSequence};
use crate::steenrod::{ComplexDoc, PolyhedralTower, SimplicialComplex, SimplicialMap};
use crate::towers::PeriodicTower;

pub const SCHEMA: &str = "protower/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Int, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a decimal integer string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                v.trim()
                    .parse()
                    .map(Int)
                    .map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
        }
        d.deserialize_any(V)
    }
}

pub type MatrixDoc = Vec<Vec<Int>>;

pub fn matrix_doc(m: &IntMatrix) -> MatrixDoc {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Int).collect())
        .collect()
}

pub fn hom_from_doc(
    m: &MatrixDoc,
    source: &FgAbGroup,
    target: &FgAbGroup,
    what: &str,
) -> Result<Homomorphism> {
    let (rows, cols) = (target.ngens(), source.ngens());
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected a {rows}×{cols} matrix"
        )));
    }
    let entries = m
        .iter()
        .map(|r| r.iter().map(|x| x.0.clone()).collect())
        .collect();
    Homomorphism::new(
        source.clone(),
        target.clone(),
        IntMatrix::from_rows(rows, cols, entries),
    )
    .map_err(|e| Error::IllDefinedHomomorphism(format!("{what}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<Int>,
}

impl GroupDoc {
    pub fn of(g: &FgAbGroup) -> GroupDoc {
        GroupDoc {
            rank: g.rank(),
            torsion: g.torsion().iter().cloned().map(Int).collect(),
        }
    }

    pub fn to_group(&self) -> Result<FgAbGroup> {
        FgAbGroup::new(
            self.rank,
            self.torsion.iter().map(|t| t.0.clone()).collect(),
        )
    }
}

/// Prefix levels `0..p`, then the cycle `cycle[0], …, cycle[q-1]` repeated
/// forever; `cycle_maps[s]: cycle[s+1 mod q] → cycle[s]` and
/// `attach: cycle[0] → prefix[p-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDoc {
    #[serde(default)]
    pub prefix: Vec<GroupDoc>,
    #[serde(default)]
    pub prefix_bonds: Vec<MatrixDoc>,
    pub cycle: Vec<GroupDoc>,
    pub cycle_maps: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attach: Option<MatrixDoc>,
}

impl TowerDoc {
    pub fn of(t: &PeriodicTower) -> TowerDoc {
        TowerDoc {
            prefix: t.prefix().iter().map(GroupDoc::of).collect(),
            prefix_bonds: t
                .prefix_bonds()
                .iter()
                .map(|b| matrix_doc(b.matrix()))
                .collect(),
            cycle: t.cycle().iter().map(GroupDoc::of).collect(),
            cycle_maps: t
                .cycle_maps()
                .iter()
                .map(|b| matrix_doc(b.matrix()))
                .collect(),
            attach: t.attach().map(|a| matrix_doc(a.matrix())),
        }
    }

    pub fn to_tower(&self) -> Result<PeriodicTower> {
        let prefix = self
            .prefix
            .iter()
            .map(GroupDoc::to_group)
            .collect::<Result<Vec<_>>>()?;
        let cycle = self
            .cycle
            .iter()
            .map(GroupDoc::to_group)
            .collect::<Result<Vec<_>>>()?;
        if self.prefix_bonds.len() != prefix.len().saturating_sub(1)
            || self.cycle_maps.len() != cycle.len()
        {
            return Err(Error::MalformedTower("wrong number of bonding maps".into()));
        }
        let bonds = self
            .prefix_bonds
            .iter()
            .enumerate()
            .map(|(i, m)| {
                hom_from_doc(m, &prefix[i + 1], &prefix[i], &format!("prefix_bonds[{i}]"))
            })
            .collect::<Result<Vec<_>>>()?;
        let q = cycle.len();
        let maps = self
            .cycle_maps
            .iter()
            .enumerate()
            .map(|(s, m)| {
                hom_from_doc(
                    m,
                    &cycle[(s + 1) % q],
                    &cycle[s],
                    &format!("cycle_maps[{s}]"),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let attach = match (&self.attach, prefix.last(), cycle.first()) {
            (Some(m), Some(last), Some(c0)) => Some(hom_from_doc(m, c0, last, "attach")?),
            (Some(_), None, _) => {
                return Err(Error::MalformedTower("attach without a prefix".into()))
            }
            _ => None,
        };
        PeriodicTower::new(prefix, bonds, cycle, maps, attach)
    }
}

/// One matrix per distinct level of the source tower.
fn level_maps(
    a: &PeriodicTower,
    c: &PeriodicTower,
    maps: &[MatrixDoc],
    what: &str,
) -> Result<LevelMap> {
    if maps.len() != a.distinct_levels() {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected {} level matrices",
            a.distinct_levels()
        )));
    }
    let homs = maps
        .iter()
        .enumerate()
        .map(|(l, m)| hom_from_doc(m, a.level(l), c.level(l), &format!("{what}[{l}]")))
        .collect::<Result<Vec<_>>>()?;
    LevelMap::new(a.clone(), c.clone(), homs)
}

pub fn level_map_docs(f: &LevelMap) -> Vec<MatrixDoc> {
    f.maps().iter().map(|m| matrix_doc(m.matrix())).collect()
}

/// A factorization `f = second ∘ first` through `tower`, with the reason
/// `lim¹ A → lim¹ B` vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThroughDoc {
    pub tower: TowerDoc,
    pub first: Vec<MatrixDoc>,
    pub second: Vec<MatrixDoc>,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelMapDoc {
    pub source: TowerDoc,
    pub target: TowerDoc,
    pub maps: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub through: Option<ThroughDoc>,
}

pub struct ParsedLevelMap {
    pub map: LevelMap,
    pub through: Option<(LevelMap, LevelMap, Evidence)>,
}

impl LevelMapDoc {
    pub fn to_level_map(&self) -> Result<ParsedLevelMap> {
        let (a, c) = (self.source.to_tower()?, self.target.to_tower()?);
        let map = level_maps(&a, &c, &self.maps, "maps")?;
        let through = match &self.through {
            None => None,
            Some(t) => {
                let b = t.tower.to_tower()?;
                Some((
                    level_maps(&a, &b, &t.first, "through.first")?,
                    level_maps(&b, &c, &t.second, "through.second")?,
                    t.evidence,
                ))
            }
        };
        Ok(ParsedLevelMap { map, through })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub columns: Vec<TowerDoc>,
    /// `horizontal[j]`: level matrices of `T_j → T_{j+1}`.
    pub horizontal: Vec<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Vec<MatrixDoc>>,
}

impl GridDoc {
    pub fn of(g: &Grid) -> GridDoc {
        GridDoc {
            columns: g.columns().iter().map(TowerDoc::of).collect(),
            horizontal: g.horizontal().iter().map(level_map_docs).collect(),
            tail: g.tail().map(level_map_docs),
        }
    }

    pub fn to_grid(&self) -> Result<Grid> {
        let cols = self
            .columns
            .iter()
            .map(TowerDoc::to_tower)
            .collect::<Result<Vec<_>>>()?;
        if self.horizontal.len() + 1 != cols.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} columns need {} horizontal maps",
                cols.len(),
                cols.len().saturating_sub(1)
            )));
        }
        let horizontal = self
            .horizontal
            .iter()
            .enumerate()
            .map(|(j, m)| level_maps(&cols[j], &cols[j + 1], m, &format!("horizontal[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        let last = cols.last().expect("nonempty");
        let tail = self
            .tail
            .as_ref()
            .map(|m| level_maps(last, last, m, "tail"))
            .transpose()?;
        Grid::new(cols, horizontal, tail)
    }
}

/// Vertex maps are lists `vertex ↦ image`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedralTowerDoc {
    #[serde(default)]
    pub prefix: Vec<ComplexDoc>,
    #[serde(default)]
    pub prefix_maps: Vec<Vec<usize>>,
    pub loop_complex: ComplexDoc,
    /// Source of `loop_map` and `retraction`; the loop complex when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdivision: Option<ComplexDoc>,
    pub loop_map: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retraction: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attach: Option<Vec<usize>>,
}

impl PolyhedralTowerDoc {
    pub fn of(t: &PolyhedralTower) -> PolyhedralTowerDoc {
        let sub = t.loop_map().source();
        PolyhedralTowerDoc {
            prefix: t.prefix().iter().map(SimplicialComplex::to_doc).collect(),
            prefix_maps: t
                .prefix_maps()
                .iter()
                .map(|m| m.vertex_map().to_vec())
                .collect(),
            loop_complex: t.loop_complex().to_doc(),
            subdivision: (sub != t.loop_complex()).then(|| sub.to_doc()),
            loop_map: t.loop_map().vertex_map().to_vec(),
            retraction: t.retraction().map(|r| r.vertex_map().to_vec()),
            attach: t.attach().map(|a| a.vertex_map().to_vec()),
        }
    }

    pub fn to_tower(&self) -> Result<PolyhedralTower> {
        let prefix = self
            .prefix
            .iter()
            .map(SimplicialComplex::from_doc)
            .collect::<Result<Vec<_>>>()?;
        if self.prefix_maps.len() != prefix.len().saturating_sub(1) {
            return Err(Error::MalformedTower(
                "prefix maps must join consecutive prefix complexes".into(),
            ));
        }
        let maps = self
            .prefix_maps
            .iter()
            .enumerate()
            .map(|(k, m)| SimplicialMap::new(prefix[k + 1].clone(), prefix[k].clone(), m.clone()))
            .collect::<Result<Vec<_>>>()?;
        let l = SimplicialComplex::from_doc(&self.loop_complex)?;
        let s = self
            .subdivision
            .as_ref()
            .map(SimplicialComplex::from_doc)
            .transpose()?
            .unwrap_or_else(|| l.clone());
        let loop_map = SimplicialMap::new(s.clone(), l.clone(), self.loop_map.clone())?;
        let retraction = self
            .retraction
            .as_ref()
            .map(|r| SimplicialMap::new(s.clone(), l.clone(), r.clone()))
            .transpose()?;
        let attach = match (&self.attach, prefix.last()) {
            (Some(a), Some(last)) => Some(SimplicialMap::new(l.clone(), last.clone(), a.clone())?),
            (Some(_), None) => return Err(Error::MalformedTower("attach without a prefix".into())),
            _ => None,
        };
        PolyhedralTower::new(prefix, maps, l, loop_map, retraction, attach)
    }
}

/// `components[j][i]: G_{l_ij, j} → G_{i, j+1}` with `l_ij = indices[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSequenceDoc {
    pub towers: Vec<TowerDoc>,
    pub indices: Vec<Vec<usize>>,
    pub components: Vec<Vec<MatrixDoc>>,
}

impl RawSequenceDoc {
    pub fn of(r: &RawInvMorphismSequence) -> RawSequenceDoc {
        RawSequenceDoc {
            towers: r.towers.iter().map(TowerDoc::of).collect(),
            indices: r.indices.clone(),
            components: r
                .components
                .iter()
                .map(|c| c.iter().map(|h| matrix_doc(h.matrix())).collect())
                .collect(),
        }
    }

    pub fn to_raw(&self) -> Result<RawInvMorphismSequence> {
        let towers = self
            .towers
            .iter()
            .map(TowerDoc::to_tower)
            .collect::<Result<Vec<_>>>()?;
        if self.indices.len() + 1 != towers.len() || self.components.len() != self.indices.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} towers need {} index rows and component rows",
                towers.len(),
                towers.len().saturating_sub(1)
            )));
        }
        let mut components = Vec::with_capacity(self.components.len());
        for (j, row) in self.components.iter().enumerate() {
            if row.len() != self.indices[j].len() {
                return Err(Error::ShapeMismatch(format!(
                    "components[{j}] and indices[{j}] differ in length"
                )));
            }
            let homs = row
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let l = self.indices[j][i];
                    hom_from_doc(
                        m,
                        towers[j].level(l),
                        towers[j + 1].level(i),
                        &format!("components[{j}][{i}]"),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            components.push(homs);
        }
        RawInvMorphismSequence::new(towers, self.indices.clone(), components)
    }
}

/// Every document: `{"schema": "protower/1", "kind": …, "data": …}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document<T> {
    pub schema: String,
    pub kind: String,
    pub data: T,
}

impl<T: Serialize> Document<T> {
    pub fn new(kind: &str, data: T) -> Self {
        Document {
            schema: SCHEMA.into(),
            kind: kind.into(),
            data,
        }
    }
}

/// Input documents by kind.
#[derive(Clone, Debug)]
pub enum Input {
    Tower(TowerDoc),
    LevelMap(LevelMapDoc),
    Grid(GridDoc),
    FinSetGrid(FinSetGrid),
    PolyhedralTower(PolyhedralTowerDoc),
    Complex(ComplexDoc),
    RawSequence(RawSequenceDoc),
}

pub const KINDS: [&str; 7] = [
    "tower",
    "level-map",
    "grid",
    "finset-grid",
    "polyhedral-tower",
    "complex",
    "raw-sequence",
];

#[derive(Deserialize)]
struct Header {
    schema: Option<String>,
    kind: Option<String>,
}

fn typed<T: for<'de> Deserialize<'de>>(text: &str) -> std::result::Result<T, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: Document<T> = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| format!("field `{}`: {}", e.path(), e.inner()))?;
    Ok(doc.data)
}

/// Parses any input document; the message names the line and field path.
pub fn parse(text: &str) -> std::result::Result<Input, String> {
    let h: Header = serde_json::from_str(text)
        .map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))?;
    match h.schema.as_deref() {
        Some(SCHEMA) => {}
        Some(other) => {
            return Err(format!(
                "field `schema`: unsupported schema `{other}`, expected `{SCHEMA}`"
            ))
        }
        None => return Err("field `schema`: missing".into()),
    }
    Ok(match h.kind.as_deref() {
        Some("tower") => Input::Tower(typed(text)?),
        Some("level-map") => Input::LevelMap(typed(text)?),
        Some("grid") => Input::Grid(typed(text)?),
        Some("finset-grid") => Input::FinSetGrid(typed(text)?),
        Some("polyhedral-tower") => Input::PolyhedralTower(typed(text)?),
        Some("complex") => Input::Complex(typed(text)?),
        Some("raw-sequence") => Input::RawSequence(typed(text)?),
        Some(k) => {
            return Err(format!(
                "field `kind`: unknown kind `{k}`, expected one of {}",
                KINDS.join(", ")
            ))
        }
        None => return Err("field `kind`: missing".into()),
    })
}
