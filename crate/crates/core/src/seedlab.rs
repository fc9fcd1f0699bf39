//! Seed genes: parsing, fold prediction, validation, and compiling shapes
//! into seeds.
//!
//! A seed is written as machine types joined by dashes, `2-3-2-3-2-3-2-3`.
//! [`predict_fold`] walks the loop like a turtle, turning by the fold angle
//! of every sideways bond (including the closing one from the last machine
//! back to the first). Every defined fold angle is a whole number of degrees
//! that divides 360, so closure is decided on the exact integer turn sum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{MachineBody, MachineType, Vec2};
use crate::rulebook::{
    bend_location, bend_location_bond_allowed, fold_angle, mirror_of_template, phene_up_bond_allowed, BendLocation,
    FoldAngle,
};

/// Positional closure tolerance, world units.
pub const CLOSURE_EPS: f64 = 1e-9;

/// A machine-type sequence of at least three machines.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SeedSpec {
    types: Vec<MachineType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedParseError {
    #[error("token {position}: `{token}` is not a machine type")]
    NotADigit { position: usize, token: String },
    #[error("token {position}: machine type {value} is outside 1-4")]
    OutOfRange { position: usize, value: u32 },
    #[error("a seed needs at least 3 machines, got {0}")]
    TooShort(usize),
}

impl SeedSpec {
    pub fn new(types: Vec<MachineType>) -> Result<Self, SeedParseError> {
        if types.len() < 3 {
            return Err(SeedParseError::TooShort(types.len()));
        }
        Ok(SeedSpec { types })
    }

    pub fn types(&self) -> &[MachineType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn mirrored(&self) -> SeedSpec {
        SeedSpec { types: mirror_of_template(&self.types) }
    }
}

/// Tokens are counted from 1.
pub fn parse_seed(text: &str) -> Result<SeedSpec, SeedParseError> {
    let mut types = Vec::new();
    for (i, token) in text.split('-').enumerate() {
        let token = token.trim();
        let position = i + 1;
        let value: u32 = match token.parse() {
            Ok(v) if !token.starts_with('+') => v,
            _ => return Err(SeedParseError::NotADigit { position, token: token.to_string() }),
        };
        let t = u8::try_from(value)
            .ok()
            .and_then(|v| MachineType::try_from(v).ok())
            .ok_or(SeedParseError::OutOfRange { position, value })?;
        types.push(t);
    }
    SeedSpec::new(types)
}

impl FromStr for SeedSpec {
    type Err = SeedParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_seed(s)
    }
}

impl TryFrom<String> for SeedSpec {
    type Error = SeedParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_seed(&s)
    }
}

impl From<SeedSpec> for String {
    fn from(s: SeedSpec) -> String {
        s.to_string()
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.types.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// The ideal folded configuration of a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    /// Machine middles, starting at the origin with the first bond along +x.
    pub vertices: Vec<Vec2>,
    /// Turn at each bond `i → i+1 (mod n)`, degrees counter-clockwise.
    pub turn_angles: Vec<u16>,
    pub total_turn: u32,
    pub closed: bool,
    /// Distance from the end of the walk back to the first vertex.
    pub closure_distance: f64,
    /// Final heading minus initial heading, degrees in (−180, 180].
    pub heading_error_deg: f64,
}

impl FoldPlan {
    /// Bonds with a nonzero turn.
    pub fn corners(&self) -> usize {
        self.turn_angles.iter().filter(|&&a| a != 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("machines {index} and {next} have types {left}-{right}, which have no fold angle")]
pub struct UndefinedFold {
    pub index: usize,
    pub next: usize,
    pub left: MachineType,
    pub right: MachineType,
}

/// Fold plan at the default sideways pitch.
pub fn predict_fold(spec: &SeedSpec) -> Result<FoldPlan, UndefinedFold> {
    predict_fold_with_pitch(spec, MachineBody::default().sideways_pitch())
}

pub fn predict_fold_with_pitch(spec: &SeedSpec, pitch: f64) -> Result<FoldPlan, UndefinedFold> {
    let n = spec.len();
    let turn_angles = loop_angles(spec.types()).map_err(|e| e.into_iter().next().expect("at least one error"))?;
    let mut vertices = Vec::with_capacity(n);
    let mut pos = Vec2::ZERO;
    let mut heading_deg: u32 = 0;
    for &turn in &turn_angles {
        vertices.push(pos);
        pos += Vec2::from_angle(f64::from(heading_deg).to_radians()) * pitch;
        heading_deg += u32::from(turn);
    }
    let total_turn = heading_deg;
    let closure_distance = pos.norm();
    let rem = f64::from(total_turn % 360);
    let heading_error_deg = if rem > 180.0 { rem - 360.0 } else { rem };
    Ok(FoldPlan {
        vertices,
        turn_angles,
        total_turn,
        closed: total_turn == 360 && closure_distance <= CLOSURE_EPS,
        closure_distance,
        heading_error_deg,
    })
}

fn loop_angles(types: &[MachineType]) -> Result<Vec<u16>, Vec<UndefinedFold>> {
    let n = types.len();
    let mut angles = Vec::with_capacity(n);
    let mut errors = Vec::new();
    for i in 0..n {
        let next = (i + 1) % n;
        match fold_angle(types[i], types[next]) {
            FoldAngle::Degrees(d) => angles.push(d),
            FoldAngle::Undefined => errors.push(UndefinedFold { index: i, next, left: types[i], right: types[next] }),
        }
    }
    if errors.is_empty() {
        Ok(angles)
    } else {
        Err(errors)
    }
}

/// Bend location of each machine once the seed has folded into a loop.
pub fn loop_bend_locations(types: &[MachineType]) -> Vec<BendLocation> {
    let n = types.len();
    (0..n).map(|i| bend_location(Some(types[(i + n - 1) % n]), Some(types[(i + 1) % n]))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MachineReport {
    pub index: usize,
    pub machine_type: MachineType,
    pub bend_location: BendLocation,
    /// Can up-bond to some machine of a phene folded from this seed or its mirror.
    pub bondable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: String,
    pub closed: bool,
    pub corners: usize,
    pub total_turn: Option<u32>,
    pub machines: Vec<MachineReport>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn bondable_count(&self) -> usize {
        self.machines.iter().filter(|m| m.bondable).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed      {}", self.seed)?;
        match self.total_turn {
            Some(t) => writeln!(f, "closed    {} (total turn {t}°, {} corners)", if self.closed { "yes" } else { "no" }, self.corners)?,
            None => writeln!(f, "closed    no (fold undefined)")?,
        }
        writeln!(f, "bondable  {}/{}", self.bondable_count(), self.machines.len())?;
        for m in &self.machines {
            writeln!(
                f,
                "  {:>3}  type {}  bend {}  {}",
                m.index,
                m.machine_type,
                m.bend_location.value(),
                if m.bondable { "up-bondable" } else { "-" }
            )?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        Ok(())
    }
}

/// Closure, mesh bondability, and diagnostics for a seed. Never fails; any
/// problem ends up in `errors` or `warnings`.
pub fn validate_seed(spec: &SeedSpec) -> ValidationReport {
    let types = spec.types();
    let mut warnings = Vec::new();
    let mut errors = Vec::new();
    let (closed, corners, total_turn) = match predict_fold(spec) {
        Ok(plan) => {
            if !plan.closed {
                errors.push(format!(
                    "the folded strand does not close (total turn {}°, gap {:.3}); the phene will stay under stress and unfold",
                    plan.total_turn, plan.closure_distance
                ));
            }
            (plan.closed, plan.corners(), Some(plan.total_turn))
        }
        Err(_) => {
            for e in loop_angles(types).err().unwrap_or_default() {
                errors.push(e.to_string());
            }
            (false, 0, None)
        }
    };

    let mine = loop_bend_locations(types);
    let mirror = mirror_of_template(types);
    let theirs = loop_bend_locations(&mirror);
    let partners: Vec<(MachineType, BendLocation)> =
        types.iter().copied().zip(mine.iter().copied()).chain(mirror.iter().copied().zip(theirs)).collect();
    let machines: Vec<MachineReport> = types
        .iter()
        .zip(&mine)
        .enumerate()
        .map(|(index, (&t, &bl))| MachineReport {
            index,
            machine_type: t,
            bend_location: bl,
            bondable: partners.iter().any(|&(pt, pbl)| phene_up_bond_allowed(t, pt) && bend_location_bond_allowed(bl, pbl)),
        })
        .collect();

    if machines.iter().all(|m| !m.bondable) {
        let msg = if types.iter().all(|&t| t == MachineType::T3) {
            "every machine is type 3; the phenes would not be able to form a mesh".to_string()
        } else {
            "no machine can form a phene up bond; the phenes would not be able to form a mesh".to_string()
        };
        warnings.push(msg);
    }
    if types.iter().all(|&t| t == MachineType::T1) {
        warnings.push("a strand of type-1 machines folds straight".to_string());
    }

    ValidationReport { seed: spec.to_string(), closed, corners, total_turn, machines, warnings, errors }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Triangle,
    Square,
    /// Side lengths in machines; the two sides are told apart by type.
    Rectangle { long: u32, short: u32 },
    Hexagon,
    Octagon,
}

impl FromStr for Shape {
    type Err = CompileError;

    /// `triangle`, `square`, `hexagon`, `octagon`, or `rectangle:LONGxSHORT`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "triangle" => return Ok(Shape::Triangle),
            "square" => return Ok(Shape::Square),
            "hexagon" => return Ok(Shape::Hexagon),
            "octagon" => return Ok(Shape::Octagon),
            _ => {}
        }
        let bad = || CompileError::UnknownShape(s.to_string());
        let dims = lower.strip_prefix("rectangle:").ok_or_else(bad)?;
        let (l, w) = dims.split_once('x').ok_or_else(bad)?;
        Ok(Shape::Rectangle { long: l.trim().parse().map_err(|_| bad())?, short: w.trim().parse().map_err(|_| bad())? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("side expansion must be at least 1")]
    ZeroExpansion,
    #[error("sides of exactly two machines cannot fold into a polygon")]
    TwoPerSide,
    #[error("a rectangle's sides must differ in length; use a square")]
    SquareRectangle,
    #[error("rectangles take their side lengths directly; expansion must be 1")]
    RectangleExpansion,
}

fn side(corner: MachineType, len: u32) -> Vec<MachineType> {
    let mut v = vec![corner];
    if len > 1 {
        v.extend(std::iter::repeat_n(MachineType::T1, len as usize - 2));
        v.push(corner);
    }
    v
}

/// A seed that folds into `shape` with `expansion` machines per side.
///
/// Each side is one corner-type machine, or for longer sides two
/// corner-type machines with type-1 extenders between them; the corner
/// turns sit on the bonds between sides.
pub fn compile_shape(shape: Shape, expansion: u32) -> Result<SeedSpec, CompileError> {
    use MachineType::{T2, T3, T4};
    if expansion == 0 {
        return Err(CompileError::ZeroExpansion);
    }
    let sides: Vec<(MachineType, u32)> = match shape {
        Shape::Triangle => vec![(T2, expansion); 3],
        Shape::Square => [T4, T2, T4, T2].map(|t| (t, expansion)).to_vec(),
        Shape::Hexagon => vec![(T4, expansion); 6],
        Shape::Octagon => [T2, T3].repeat(4).into_iter().map(|t| (t, expansion)).collect(),
        Shape::Rectangle { long, short } => {
            if expansion != 1 {
                return Err(CompileError::RectangleExpansion);
            }
            if long == 0 || short == 0 {
                return Err(CompileError::ZeroExpansion);
            }
            if long == short {
                return Err(CompileError::SquareRectangle);
            }
            vec![(T2, long), (T4, short), (T2, long), (T4, short)]
        }
    };
    if sides.iter().any(|&(_, len)| len == 2) {
        return Err(CompileError::TwoPerSide);
    }
    let types = sides.into_iter().flat_map(|(t, len)| side(t, len)).collect();
    Ok(SeedSpec::new(types).expect("every shape has at least three sides"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seed(s: &str) -> SeedSpec {
        parse_seed(s).unwrap()
    }

    #[test]
    fn parses_table_seeds() {
        assert_eq!(seed("2-2-2").types(), &[MachineType::T2; 3]);
        assert_eq!(seed(" 2 - 4-2-1-2-4-2-1 ").to_string(), "2-4-2-1-2-4-2-1");
    }

    #[test]
    fn parse_errors_carry_position() {
        assert_eq!(parse_seed("2-5-2"), Err(SeedParseError::OutOfRange { position: 2, value: 5 }));
        assert!(matches!(parse_seed("2-x-2"), Err(SeedParseError::NotADigit { position: 2, .. })));
        assert!(matches!(parse_seed("2--2"), Err(SeedParseError::NotADigit { position: 2, .. })));
        assert_eq!(parse_seed("2-2"), Err(SeedParseError::TooShort(2)));
    }

    #[test]
    fn triangle_plan_is_equilateral() {
        let plan = predict_fold(&seed("2-2-2")).unwrap();
        assert!(plan.closed);
        assert_eq!(plan.turn_angles, vec![120, 120, 120]);
        let d = |a: Vec2, b: Vec2| a.distance(b);
        let v = &plan.vertices;
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            assert!((d(v[a], v[b]) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn octagon_and_open_square() {
        let oct = predict_fold(&seed("2-3-2-3-2-3-2-3")).unwrap();
        assert!(oct.closed && oct.corners() == 8 && oct.turn_angles.iter().all(|&a| a == 45));
        let open = predict_fold(&seed("2-2-2-2")).unwrap();
        assert_eq!(open.total_turn, 480);
        assert!(!open.closed);
    }

    #[test]
    fn undefined_fold_is_an_error() {
        let err = predict_fold(&seed("3-3-3")).unwrap_err();
        assert_eq!((err.left, err.right), (MachineType::T3, MachineType::T3));
        assert!(!validate_seed(&seed("3-3-3")).is_valid());
    }

    #[test]
    fn validation_reports() {
        let tri = validate_seed(&seed("2-2-2"));
        assert!(tri.is_valid() && tri.closed && tri.bondable_count() == 3);

        let big = validate_seed(&seed("2-1-2-2-1-2-2-1-2"));
        assert!(big.is_valid() && big.closed && big.corners == 3);
        for m in &big.machines {
            assert_eq!(m.bondable, m.machine_type != MachineType::T1, "machine {}", m.index);
        }
    }

    #[test]
    fn compile_examples() {
        assert_eq!(compile_shape(Shape::Triangle, 1).unwrap().to_string(), "2-2-2");
        assert_eq!(compile_shape(Shape::Hexagon, 1).unwrap().to_string(), "4-4-4-4-4-4");
        assert_eq!(compile_shape(Shape::Triangle, 3).unwrap().to_string(), "2-1-2-2-1-2-2-1-2");
        assert_eq!(compile_shape(Shape::Square, 1).unwrap().to_string(), "4-2-4-2");
        assert_eq!(compile_shape(Shape::Octagon, 1).unwrap().to_string(), "2-3-2-3-2-3-2-3");
        assert_eq!(compile_shape(Shape::Triangle, 2), Err(CompileError::TwoPerSide));
        assert_eq!(compile_shape(Shape::Rectangle { long: 3, short: 3 }, 1), Err(CompileError::SquareRectangle));
    }

    #[test]
    fn rectangle_matches_the_expanded_seed_up_to_rotation() {
        let got = compile_shape(Shape::Rectangle { long: 3, short: 1 }, 1).unwrap();
        let want = seed("2-4-2-1-2-4-2-1");
        let n = got.len();
        assert!((0..n).any(|r| (0..n).all(|i| got.types()[(i + r) % n] == want.types()[i])));
    }

    #[test]
    fn shape_names_parse() {
        assert_eq!("Hexagon".parse::<Shape>().unwrap(), Shape::Hexagon);
        assert_eq!("rectangle:5x1".parse::<Shape>().unwrap(), Shape::Rectangle { long: 5, short: 1 });
        assert!("pentagon".parse::<Shape>().is_err());
    }

    fn shapes() -> impl Strategy<Value = Shape> {
        prop_oneof![
            Just(Shape::Triangle),
            Just(Shape::Square),
            Just(Shape::Hexagon),
            Just(Shape::Octagon),
        ]
    }

    proptest! {
        #[test]
        fn compiled_shapes_validate(shape in shapes(), e in prop_oneof![Just(1u32), 3u32..8]) {
            let spec = compile_shape(shape, e).unwrap();
            let report = validate_seed(&spec);
            prop_assert!(report.is_valid(), "{}", report);
            prop_assert!(report.closed);
        }

        #[test]
        fn rectangles_validate(long in 3u32..9, short in prop_oneof![Just(1u32), 3u32..9]) {
            prop_assume!(long != short);
            let report = validate_seed(&compile_shape(Shape::Rectangle { long, short }, 1).unwrap());
            prop_assert!(report.is_valid() && report.closed && report.corners == 4);
        }

        #[test]
        fn mirror_preserves_closure(types in prop::collection::vec(1u8..=4, 3..12)) {
            let spec = SeedSpec::new(types.into_iter().map(|t| MachineType::try_from(t).unwrap()).collect()).unwrap();
            if let (Ok(a), Ok(b)) = (predict_fold(&spec), predict_fold(&spec.mirrored())) {
                prop_assert_eq!(a.closed, b.closed);
                if a.closed {
                    let mut da: Vec<u16> = a.turn_angles.clone();
                    let mut db: Vec<u16> = b.turn_angles.clone();
                    da.sort_unstable();
                    db.sort_unstable();
                    prop_assert_eq!(da, db);
                    prop_assert_eq!(b.total_turn, 360);
                }
            }
        }

        #[test]
        fn type1_insertion_keeps_the_turn_sum(shape in shapes(), at in 0usize..64) {
            let spec = compile_shape(shape, 3).unwrap();
            let mut types = spec.types().to_vec();
            let ones: Vec<usize> = (0..types.len()).filter(|&i| types[i] == MachineType::T1).collect();
            types.insert(ones[at % ones.len()], MachineType::T1);
            let plan = predict_fold(&SeedSpec::new(types).unwrap()).unwrap();
            prop_assert_eq!(plan.total_turn, 360);
        }

        #[test]
        fn type1_insertion_on_every_side_keeps_closure(shape in shapes(), extra in 1usize..4) {
            let spec = compile_shape(shape, 3).unwrap();
            let mut types = Vec::new();
            for &t in spec.types() {
                types.push(t);
                if t == MachineType::T1 {
                    types.extend(std::iter::repeat_n(MachineType::T1, extra));
                }
            }
            prop_assert!(predict_fold(&SeedSpec::new(types).unwrap()).unwrap().closed);
        }
    }
}
