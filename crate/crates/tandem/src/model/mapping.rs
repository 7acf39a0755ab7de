//! Mappings: the total assignment of components to devices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::graph::ModelGraph;
use crate::model::platform::Platform;

/// A total assignment of every component to exactly one device.
/// Serializes as a bare `{component id: device id}` object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Mapping {
    pub assignment: BTreeMap<String, String>,
}

impl Mapping {
    pub fn device_of(&self, component: &str) -> Option<&str> {
        self.assignment.get(component).map(String::as_str)
    }

    /// Confirms the mapping is total over `graph` and only references devices
    /// that exist on `platform`.
    pub fn validate_for(&self, graph: &ModelGraph, platform: &Platform) -> Result<()> {
        for c in &graph.components {
            match self.assignment.get(&c.id) {
                None => {
                    return Err(Error::UnmappedComponent { id: c.id.clone() });
                }
                Some(device) => {
                    if platform.device(device).is_none() {
                        return Err(Error::UnknownDevice { id: device.clone() });
                    }
                }
            }
        }
        for id in self.assignment.keys() {
            if graph.component(id).is_none() {
                return Err(Error::UnknownComponent { id: id.clone() });
            }
        }
        Ok(())
    }
}

impl FromIterator<(String, String)> for Mapping {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        Mapping {
            assignment: iter.into_iter().collect(),
        }
    }
}
