use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use hopnav_core::applications::MstVerifier;
use hopnav_core::cover::MetricNavigator;
use hopnav_core::routing::RoutingScheme;
use hopnav_core::spanner::Navigator;

use crate::ApiError;

pub struct TreeEntry {
    pub nav: Navigator,
    verifier: OnceLock<Result<MstVerifier, ApiError>>,
}

impl TreeEntry {
    pub fn new(nav: Navigator) -> Self {
        TreeEntry {
            nav,
            verifier: OnceLock::new(),
        }
    }

    /// Built on first use.
    pub fn verifier(&self) -> Result<&MstVerifier, ApiError> {
        self.verifier
            .get_or_init(|| MstVerifier::new(self.nav.clone()).map_err(ApiError::from))
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub struct MetricEntry {
    pub nav: MetricNavigator,
    /// Labels of the points when the metric came from a tree.
    pub points: Option<Vec<u64>>,
}

#[derive(Default)]
struct Store {
    next: u64,
    trees: HashMap<u64, Arc<TreeEntry>>,
    routing: HashMap<u64, Arc<RoutingScheme>>,
    metrics: HashMap<u64, Arc<MetricEntry>>,
}

#[derive(Clone, Default)]
pub struct AppState(Arc<RwLock<Store>>);

impl AppState {
    fn insert_with(&self, put: impl FnOnce(&mut Store, u64)) -> u64 {
        let mut s = self.0.write().unwrap();
        s.next += 1;
        let id = s.next;
        put(&mut s, id);
        id
    }

    pub fn add_tree(&self, e: TreeEntry) -> u64 {
        self.insert_with(|s, id| {
            s.trees.insert(id, Arc::new(e));
        })
    }

    pub fn add_routing(&self, r: RoutingScheme) -> u64 {
        self.insert_with(|s, id| {
            s.routing.insert(id, Arc::new(r));
        })
    }

    pub fn add_metric(&self, m: MetricEntry) -> u64 {
        self.insert_with(|s, id| {
            s.metrics.insert(id, Arc::new(m));
        })
    }

    pub fn tree(&self, id: u64) -> Result<Arc<TreeEntry>, ApiError> {
        self.0.read().unwrap().trees.get(&id).cloned().ok_or_else(|| ApiError::not_found("tree", id))
    }

    pub fn remove_tree(&self, id: u64) -> Result<(), ApiError> {
        self.0.write().unwrap().trees.remove(&id).map(|_| ()).ok_or_else(|| ApiError::not_found("tree", id))
    }

    pub fn routing(&self, id: u64) -> Result<Arc<RoutingScheme>, ApiError> {
        self.0
            .read()
            .unwrap()
            .routing
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("routing scheme", id))
    }

    pub fn metric(&self, id: u64) -> Result<Arc<MetricEntry>, ApiError> {
        self.0.read().unwrap().metrics.get(&id).cloned().ok_or_else(|| ApiError::not_found("metric", id))
    }
}
