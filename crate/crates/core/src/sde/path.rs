use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Named scalar channels sampled on every node of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord<T> {
    grid: TimeGrid<T>,
    channels: Vec<(String, Vec<T>)>,
}

impl<T: Real> PathRecord<T> {
    pub fn new(grid: TimeGrid<T>) -> Self {
        Self {
            grid,
            channels: Vec::new(),
        }
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    /// Adds a channel; it must have one value per grid node and a fresh name.
    pub fn add_channel(&mut self, name: &str, values: Vec<T>) -> Result<()> {
        if values.len() != self.grid.n_nodes() {
            return Err(Error::Contract(format!(
                "channel `{name}` has {} values, grid has {} nodes",
                values.len(),
                self.grid.n_nodes()
            )));
        }
        if self.channels.iter().any(|(n, _)| n == name) {
            return Err(Error::Contract(format!("duplicate channel `{name}`")));
        }
        self.channels.push((name.to_owned(), values));
        Ok(())
    }

    pub fn with_channel(mut self, name: &str, values: Vec<T>) -> Result<Self> {
        self.add_channel(name, values)?;
        Ok(self)
    }

    pub fn channel(&self, name: &str) -> Result<&[T]> {
        self.channels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::MissingChannel(name.to_owned()))
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|(n, _)| n.as_str())
    }
}
