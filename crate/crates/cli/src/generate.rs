use cubuland::generate::{
    random_manifold, random_pattern, random_wallspace, ManifoldParams, PatternParams, WallspaceParams,
};
use cubuland::wallspace::WallspaceDoc;

use crate::args::{Format, GenerateCommand};
use crate::error::Result;
use crate::output::Output;

/// Instances are always written as JSON.
pub fn run(cmd: &GenerateCommand, out: &mut Output) -> Result<u8> {
    out.require(&[Format::Text, Format::Json])?;
    match *cmd {
        GenerateCommand::Manifold { seed, blocks, max_genus, max_boundary, max_entry, word_len, free_tori } => {
            let params = ManifoldParams { blocks, max_genus, max_boundary, max_entry, word_len, free_tori };
            out.json(&random_manifold(seed, &params)?.to_doc())?;
        }
        GenerateCommand::Wallspace { seed, points, walls } => {
            let ws = random_wallspace(seed, &WallspaceParams { points, walls })?;
            out.json(&WallspaceDoc::from_wallspace(&ws))?;
        }
        GenerateCommand::Pattern { seed, orbits, period, max_r, always } => {
            let params = PatternParams { orbits, m: period, max_r, always };
            out.json(&random_pattern(seed, &params)?.to_doc())?;
        }
    }
    Ok(0)
}
