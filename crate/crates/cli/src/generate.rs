use std::path::{Path, PathBuf};
use std::sync::Arc;

use ccw_core::covers::{CoverFamily, GroundAction};
use ccw_core::gen;
use ccw_core::group::{GroupSpec, GroupWindow};
use ccw_core::homotopy::{genuine_to_homotopy, standard_s};
use ccw_core::io;
use ccw_core::q;
use ccw_core::refine::as_fiber_cover;
use ccw_core::space::{interval_compactification, tree_boundary_model, CompactificationModel};
use ccw_core::{Error, Result};
use clap::{Args, ValueEnum};

use crate::docs::{self, ground_cap, Space};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenKind {
    /// ℤ window acting on the two-point compactified interval.
    Interval,
    /// Free group acting on a truncated tree with its depth-D boundary.
    Tree,
    /// ℤⁿ window acting by partial translations on a box.
    Grid,
    /// F₂ acting on ℤ/7 by x+1 and 2x.
    Z7,
    /// A finite group acting on itself.
    Regular,
    /// Layered bricks on a ℤ window.
    BrickCover,
    FullCover,
    FiberCover,
    SplitCover,
    CylinderCover,
    /// Random disjoint cover with a verified Lebesgue number.
    ZeroDim,
    /// Random equivariant family of point sets, as fibers `G × W`.
    EquivariantFamily,
    /// Constant homotopies of the genuine action.
    Homotopy,
    /// Interval homotopy action with random perturbations.
    PerturbedHomotopy,
    /// Random finite union of coset spaces of a finite group.
    CosetSpace,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    pub kind: GenKind,
    /// Output document.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Window radius.
    #[arg(long = "R", default_value_t = 64)]
    pub radius: u32,
    /// Rank of the free group or lattice.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Finite group: cN, s3, klein4, or a product such as c2*c3.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long = "L", default_value_t = 16)]
    pub brick: u32,
    #[arg(long, default_value_t = 2)]
    pub layers: u32,
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub action: Option<ActionArg>,
    #[arg(long, default_value = "2")]
    pub alpha: String,
    #[arg(long, default_value_t = 20)]
    pub moves: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cylinder word length.
    #[arg(long, default_value_t = 2)]
    pub level: usize,
    #[arg(long, default_value_t = 2)]
    pub perturbations: usize,
    #[arg(long, default_value_t = 2)]
    pub samples: usize,
    #[arg(long, default_value_t = 2)]
    pub orbits: usize,
    #[arg(long, default_value_t = 24)]
    pub max_points: usize,
    /// Number of grown sets in an equivariant family.
    #[arg(long, default_value_t = 2)]
    pub grown: usize,
    #[arg(long, default_value_t = 2)]
    pub growth: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ActionArg {
    Diagonal,
    Translation,
}

impl From<ActionArg> for GroundAction {
    fn from(a: ActionArg) -> Self {
        match a {
            ActionArg::Diagonal => GroundAction::Diagonal,
            ActionArg::Translation => GroundAction::Translation,
        }
    }
}

pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let factors: Vec<&str> = s.split('*').map(str::trim).collect();
    if factors.len() > 1 {
        return Ok(GroupSpec::product(factors.into_iter().map(parse_group).collect::<Result<_>>()?));
    }
    let s = s.to_ascii_lowercase();
    let num = |t: &str| t.parse::<usize>().map_err(|_| Error::InvalidSpec(s.clone()));
    match s.as_str() {
        "z" => Ok(GroupSpec::integers()),
        "s3" => Ok(GroupSpec::symmetric3()),
        "klein4" | "v4" => Ok(GroupSpec::klein4()),
        _ if s.starts_with("z^") => Ok(GroupSpec::free_abelian(num(&s[2..])?)),
        _ if s.starts_with('f') => Ok(GroupSpec::free(num(&s[1..])?)),
        _ if s.starts_with('c') => {
            let n = num(&s[1..])?;
            if n == 0 {
                return Err(Error::InvalidSpec(s));
            }
            Ok(GroupSpec::cyclic(n))
        }
        _ => Err(Error::InvalidSpec(s)),
    }
}

pub fn run(a: &GenerateArgs) -> i32 {
    match generate(a) {
        Ok(()) => 0,
        Err(e) => docs::fatal(&e),
    }
}

fn window(spec: &GroupSpec, radius: u32) -> Result<Arc<GroupWindow>> {
    Ok(Arc::new(GroupWindow::build(spec, radius)?))
}

fn write_model(out: &Path, model: &CompactificationModel) -> Result<Space> {
    let v = io::space_doc(model);
    docs::write_document(Some(out), &v)?;
    docs::write_document(Some(&docs::sibling(out, "window")), &io::window_doc(&model.window))?;
    Ok(Space {
        model: Arc::new(model.clone()),
        hash: io::content_hash(&v),
    })
}

fn write_cover(out: &Path, cover: &CoverFamily, space: &Space) -> Result<()> {
    docs::write_document(Some(out), &io::cover_doc(cover, &space.hash))
}

fn finite_group(a: &GenerateArgs) -> Result<GroupSpec> {
    parse_group(a.group.as_deref().unwrap_or("c6"))
}

fn generate(a: &GenerateArgs) -> Result<()> {
    let out = a.output.as_path();
    let space_arg = || docs::load_space(docs::required(&a.space, "space")?);
    let action = |default: GroundAction| a.action.map(GroundAction::from).unwrap_or(default);
    match a.kind {
        GenKind::Interval => {
            let w = window(&GroupSpec::integers(), a.radius)?;
            write_model(out, &interval_compactification(w)?)?;
        }
        GenKind::Tree => {
            let m = tree_boundary_model(a.k, a.depth, a.radius, ground_cap())?;
            write_model(out, &m)?;
        }
        GenKind::Grid => {
            let w = window(&GroupSpec::free_abelian(a.k), a.radius)?;
            write_model(out, &gen::lattice_grid_model(w)?)?;
        }
        GenKind::Z7 => {
            let w = window(&GroupSpec::free(2), a.radius)?;
            write_model(out, &gen::free_on_z7_model(w)?)?;
        }
        GenKind::Regular => {
            let spec = finite_group(a)?;
            let w = window(&spec, a.radius)?;
            write_model(out, &gen::regular_model(w)?)?;
        }
        GenKind::CosetSpace => {
            let w = window(&finite_group(a)?, a.radius)?;
            write_model(out, &gen::random_coset_space(w, a.orbits, a.max_points, a.seed)?)?;
        }
        GenKind::BrickCover => {
            let space = match &a.space {
                Some(p) => docs::load_space(p)?,
                None => {
                    let w = window(&GroupSpec::integers(), a.radius)?;
                    write_model(&docs::sibling(out, "space"), &interval_compactification(w)?)?
                }
            };
            let ground = docs::ground(&space, action(GroundAction::Translation))?;
            write_cover(out, &gen::brick_cover(ground, a.brick, a.layers)?, &space)?;
        }
        GenKind::FullCover => {
            let space = space_arg()?;
            let ground = docs::ground(&space, action(GroundAction::Diagonal))?;
            let full = ground.full_set();
            write_cover(out, &CoverFamily::new(ground, vec![full])?, &space)?;
        }
        GenKind::FiberCover => {
            let space = space_arg()?;
            let ground = docs::ground(&space, action(GroundAction::Diagonal))?;
            let points: Vec<usize> = (0..space.model.len()).collect();
            write_cover(out, &gen::fiber_cover(ground, &points)?, &space)?;
        }
        GenKind::SplitCover => {
            let space = space_arg()?;
            let ground = docs::ground(&space, action(GroundAction::Diagonal))?;
            write_cover(out, &gen::boundary_split_cover(ground)?, &space)?;
        }
        GenKind::CylinderCover => {
            let space = space_arg()?;
            let ground = docs::ground(&space, action(GroundAction::Translation))?;
            write_cover(out, &gen::cylinder_cover(ground, a.level)?, &space)?;
        }
        GenKind::ZeroDim => {
            let space = space_arg()?;
            let ground = docs::ground(&space, action(GroundAction::Diagonal))?;
            let alpha = q::parse(&a.alpha)?;
            write_cover(out, &gen::random_zero_dim_cover(ground, &alpha, a.moves, a.seed)?, &space)?;
        }
        GenKind::EquivariantFamily => {
            let space = space_arg()?;
            let family = gen::random_equivariant_family(&space.model, a.grown, a.growth, a.seed);
            write_cover(out, &as_fiber_cover(space.model.clone(), &family)?, &space)?;
        }
        GenKind::Homotopy => {
            let space = space_arg()?;
            let ha = genuine_to_homotopy(space.model.clone(), &standard_s(&space.model.window), &[])?;
            docs::write_document(Some(out), &io::homotopy_doc(&ha, &space.hash))?;
        }
        GenKind::PerturbedHomotopy => {
            let ha = gen::perturbed_interval_homotopy(a.radius, a.perturbations, a.samples, a.seed)?;
            let space = write_model(&docs::sibling(out, "space"), &ha.model)?;
            docs::write_document(Some(out), &io::homotopy_doc(&ha, &space.hash))?;
        }
    }
    Ok(())
}
