//! Saving and resuming the search work lists.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sequence::{Cube, read_cubes, write_cubes};

/// Where and how often the search writes its state.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub dir: PathBuf,
    /// Generations between saves; the final state is always saved.
    pub every: usize,
}

impl Checkpoint {
    pub(crate) fn due(&self, generation: usize) -> bool {
        self.every > 0 && generation.is_multiple_of(self.every)
    }
}

/// The pending work list and the three result lists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchState {
    pub pending: Vec<Cube>,
    pub a: Vec<Cube>,
    pub b: Vec<Cube>,
    pub r: Vec<Cube>,
    pub generation: usize,
}

const LISTS: [&str; 4] = ["pending", "a", "b", "r"];

impl SearchState {
    pub fn new(pending: Vec<Cube>) -> Self {
        SearchState { pending, ..SearchState::default() }
    }

    fn lists(&self) -> [&Vec<Cube>; 4] {
        [&self.pending, &self.a, &self.b, &self.r]
    }

    /// Writes one cube file per list plus a generation marker. Each file is
    /// written beside its target and renamed into place.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, cubes) in LISTS.iter().zip(self.lists()) {
            let path = dir.join(format!("{name}.cubes"));
            let tmp = dir.join(format!("{name}.cubes.tmp"));
            write_cubes(&tmp, cubes)?;
            std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        }
        let marker = dir.join("generation");
        std::fs::write(&marker, format!("{}\n", self.generation)).map_err(|e| Error::io(&marker, e))
    }

    pub fn load(dir: &Path) -> Result<SearchState> {
        let read = |name: &str| read_cubes(&dir.join(format!("{name}.cubes")));
        let marker = dir.join("generation");
        let text = std::fs::read_to_string(&marker).map_err(|e| Error::io(&marker, e))?;
        let generation =
            text.trim().parse().map_err(|e| Error::Parse { line: 1, msg: format!("generation marker: {e}") })?;
        Ok(SearchState { pending: read("pending")?, a: read("a")?, b: read("b")?, r: read("r")?, generation })
    }
}
