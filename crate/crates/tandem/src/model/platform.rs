//! Hardware platforms: devices and the links between them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// A processing element. Latency of a component is work / throughput.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Device {
    pub id: String,
    /// Operations per second; must be positive.
    pub throughput: f64,
    /// Watts drawn while the device hosts at least one component.
    pub power_active: f64,
}

/// A bidirectional link between two distinct devices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub a: String,
    pub b: String,
    /// MB per second; must be positive.
    pub bandwidth: f64,
    /// Fixed per-transfer latency in seconds.
    pub hop_latency: f64,
}

/// A set of devices with a link for every unordered device pair.
/// Transfers between components on the same device are free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Platform {
    pub devices: Vec<Device>,
    #[serde(default)]
    pub links: Vec<Link>,
}

impl Platform {
    pub fn device(&self, id: &str) -> Option<&Device> {
        self.devices.iter().find(|d| d.id == id)
    }

    /// Link parameters for an unordered device pair, if declared.
    pub fn link(&self, a: &str, b: &str) -> Option<&Link> {
        self.links
            .iter()
            .find(|l| (l.a == a && l.b == b) || (l.a == b && l.b == a))
    }

    /// Every structural problem with this platform, one message per issue.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.devices.is_empty() {
            issues.push("platform declares no devices".to_string());
        }

        let mut ids = BTreeSet::new();
        for d in &self.devices {
            if !ids.insert(d.id.as_str()) {
                issues.push(format!("duplicate device id `{}`", d.id));
            }
            if !(d.throughput > 0.0 && d.throughput.is_finite()) {
                issues.push(format!(
                    "device `{}` throughput must be positive and finite, got {}",
                    d.id, d.throughput
                ));
            }
            if !(d.power_active >= 0.0 && d.power_active.is_finite()) {
                issues.push(format!(
                    "device `{}` power_active must be >= 0 and finite, got {}",
                    d.id, d.power_active
                ));
            }
        }

        let mut covered: BTreeMap<(&str, &str), usize> = BTreeMap::new();
        for l in &self.links {
            if l.a == l.b {
                issues.push(format!("link `{}` -> `{}` joins a device to itself", l.a, l.b));
                continue;
            }
            for end in [&l.a, &l.b] {
                if !ids.contains(end.as_str()) {
                    issues.push(format!("link references unknown device `{end}`"));
                }
            }
            if !(l.bandwidth > 0.0 && l.bandwidth.is_finite()) {
                issues.push(format!(
                    "link `{}` <-> `{}` bandwidth must be positive and finite, got {}",
                    l.a, l.b, l.bandwidth
                ));
            }
            if !(l.hop_latency >= 0.0 && l.hop_latency.is_finite()) {
                issues.push(format!(
                    "link `{}` <-> `{}` hop_latency must be >= 0 and finite, got {}",
                    l.a, l.b, l.hop_latency
                ));
            }
            if ids.contains(l.a.as_str()) && ids.contains(l.b.as_str()) {
                let key = if l.a <= l.b {
                    (l.a.as_str(), l.b.as_str())
                } else {
                    (l.b.as_str(), l.a.as_str())
                };
                *covered.entry(key).or_insert(0) += 1;
            }
        }

        for (key, count) in &covered {
            if *count > 1 {
                issues.push(format!(
                    "device pair `{}` <-> `{}` has {count} links; exactly one is allowed",
                    key.0, key.1
                ));
            }
        }
        let device_ids: Vec<&str> = ids.iter().copied().collect();
        for i in 0..device_ids.len() {
            for j in (i + 1)..device_ids.len() {
                if !covered.contains_key(&(device_ids[i], device_ids[j])) {
                    issues.push(format!(
                        "device pair `{}` <-> `{}` has no link",
                        device_ids[i], device_ids[j]
                    ));
                }
            }
        }

        issues
    }
}
