//! Fisheye layout: the whole tree in one viewport, with the parts away
//! from the active paths squeezed and grayed.
//!
//! Each node gets a degree-of-interest distance (undirected hops to the
//! nearest active node). Its box is scaled by `max(min_scale, decay^d)`
//! inside a layered tidy layout, and the finished drawing is scaled
//! uniformly, if needed, to fit the viewport.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nav::NavState;
use crate::tree::{EdgeSymbol, NodeId, NodeKind, TreeDef, TreeError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    width: f64,
    height: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("viewport must have positive finite dimensions, got {0}x{1}")]
    BadViewport(f64, f64),
    #[error("invalid layout parameter: {0}")]
    BadParams(String),
}

impl Viewport {
    pub fn new(width: f64, height: f64) -> Result<Self, LayoutError> {
        if width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite() {
            Ok(Viewport { width, height })
        } else {
            Err(LayoutError::BadViewport(width, height))
        }
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }
}

impl std::str::FromStr for Viewport {
    type Err = LayoutError;

    /// Parses `WIDTHxHEIGHT`, e.g. `1280x800`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LayoutError::BadViewport(f64::NAN, f64::NAN);
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let w: f64 = w.trim().parse().map_err(|_| bad())?;
        let h: f64 = h.trim().parse().map_err(|_| bad())?;
        Viewport::new(w, h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub base_node_width: f64,
    pub base_node_height: f64,
    pub h_gap: f64,
    pub v_gap: f64,
    pub decay: f64,
    pub min_scale: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            base_node_width: 160.0,
            base_node_height: 60.0,
            h_gap: 24.0,
            v_gap: 40.0,
            decay: 0.6,
            min_scale: 0.25,
        }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<(), LayoutError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(LayoutError::BadParams(format!("{name} must be positive, got {v}")))
            }
        };
        positive("base_node_width", self.base_node_width)?;
        positive("base_node_height", self.base_node_height)?;
        positive("h_gap", self.h_gap)?;
        positive("v_gap", self.v_gap)?;
        for (name, v) in [("decay", self.decay), ("min_scale", self.min_scale)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(LayoutError::BadParams(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.height
    }

    /// Interiors intersect. Touching edges do not count.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x < other.right()
            && other.x < self.right()
            && self.y < other.bottom()
            && other.y < self.bottom()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeBox {
    pub id: NodeId,
    pub kind: NodeKind,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    /// Degree-of-interest scale, before the fit-to-viewport zoom.
    pub scale: f64,
    pub distance: u32,
    pub grayed: bool,
    pub current: bool,
}

impl NodeBox {
    pub fn rect(&self) -> Rect {
        Rect {
            x: self.x,
            y: self.y,
            width: self.width,
            height: self.height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgePath {
    pub from: NodeId,
    pub to: NodeId,
    pub answer: String,
    pub symbol: EdgeSymbol,
    pub selected: bool,
    /// Labels and symbols follow the child's scale.
    pub label_scale: f64,
    /// Orthogonal route from the parent's bottom to the child's top.
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layout {
    pub viewport: Viewport,
    /// Uniform factor applied to fit the viewport; 1 when the drawing fits.
    pub zoom: f64,
    pub bounds: Rect,
    pub nodes: Vec<NodeBox>,
    pub edges: Vec<EdgePath>,
}

impl Layout {
    pub fn node(&self, id: &str) -> Option<&NodeBox> {
        self.nodes.iter().find(|n| n.id == id)
    }
}

/// Hop distance from each node to the active set (current nodes and
/// endpoints of selected edges). All zero before any selection.
pub fn doi_distances(state: &NavState) -> Vec<u32> {
    let tree = state.tree();
    let n = tree.node_count();
    if state.selected_indices().is_empty() {
        return vec![0; n];
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if state.is_active(v) {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        let parent = tree.parent(v);
        let children = tree.out_edges(v).iter().map(|&e| tree.edge_target(e));
        for u in parent.into_iter().chain(children) {
            if dist[u] == u32::MAX {
                dist[u] = next;
                queue.push_back(u);
            }
        }
    }
    dist
}

pub fn doi_distance(state: &NavState, node: &str) -> Result<u32, TreeError> {
    let i = state.tree().require(node)?;
    Ok(doi_distances(state)[i])
}

pub fn node_scale(distance: u32, params: &LayoutParams) -> f64 {
    let d = i32::try_from(distance).unwrap_or(i32::MAX);
    params.decay.powi(d).max(params.min_scale)
}

/// Nodes neither on a selected path nor still reachable from an open
/// question.
pub fn grayed_nodes(state: &NavState) -> Vec<bool> {
    let tree = state.tree();
    let open: Vec<usize> = state.open_questions().collect();
    (0..tree.node_count())
        .map(|v| !state.is_active(v) && !open.iter().any(|&f| tree.is_descendant(v, f)))
        .collect()
}

pub fn layout(tree: &TreeDef, state: &NavState, viewport: Viewport, params: &LayoutParams) -> Layout {
    debug_assert!(std::ptr::eq(tree, state.tree().as_ref()) || tree == state.tree().as_ref());
    let n = tree.node_count();
    let dist = doi_distances(state);
    let grayed = grayed_nodes(state);
    let scale: Vec<f64> = dist.iter().map(|&d| node_scale(d, params)).collect();
    let w: Vec<f64> = scale.iter().map(|s| params.base_node_width * s).collect();
    let h: Vec<f64> = scale.iter().map(|s| params.base_node_height * s).collect();

    let children = |v: usize| tree.out_edges(v).iter().map(move |&e| tree.edge_target(e));

    // Preorder, so reversing it visits children before parents.
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![tree.root_index()];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(children(v).collect::<Vec<_>>().into_iter().rev());
    }

    let mut span = vec![0.0; n];
    let mut subtree = vec![0.0; n];
    for &v in order.iter().rev() {
        let kids: Vec<usize> = children(v).collect();
        let mut total = 0.0;
        for (k, &c) in kids.iter().enumerate() {
            if k > 0 {
                total += params.h_gap * scale[kids[k - 1]].max(scale[c]);
            }
            total += subtree[c];
        }
        span[v] = total;
        subtree[v] = w[v].max(total);
    }

    let mut depth_count = 0;
    for &v in &order {
        depth_count = depth_count.max(tree.depth(v) + 1);
    }
    let mut row_height = vec![0.0_f64; depth_count];
    let mut row_scale = vec![0.0_f64; depth_count];
    for v in 0..n {
        let d = tree.depth(v);
        row_height[d] = row_height[d].max(h[v]);
        row_scale[d] = row_scale[d].max(scale[v]);
    }
    let mut row_top = vec![0.0; depth_count];
    for d in 1..depth_count {
        row_top[d] = row_top[d - 1] + row_height[d - 1] + params.v_gap * row_scale[d];
    }

    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut left = vec![0.0; n];
    for &v in &order {
        let d = tree.depth(v);
        x[v] = left[v] + (subtree[v] - w[v]) / 2.0;
        y[v] = row_top[d] + (row_height[d] - h[v]) / 2.0;
        let kids: Vec<usize> = children(v).collect();
        let mut cursor = left[v] + (subtree[v] - span[v]) / 2.0;
        for (k, &c) in kids.iter().enumerate() {
            if k > 0 {
                cursor += params.h_gap * scale[kids[k - 1]].max(scale[c]);
            }
            left[c] = cursor;
            cursor += subtree[c];
        }
    }

    let min_x = (0..n).map(|v| x[v]).fold(f64::INFINITY, f64::min);
    let max_x = (0..n).map(|v| x[v] + w[v]).fold(f64::NEG_INFINITY, f64::max);
    let max_y = (0..n).map(|v| y[v] + h[v]).fold(f64::NEG_INFINITY, f64::max);
    let (width, height) = (max_x - min_x, max_y);
    // The relative slack absorbs rounding in the products below.
    let slack = 1.0 - 1e-9;
    let zoom = 1.0_f64
        .min(viewport.width / width * slack)
        .min(viewport.height / height * slack);
    let offset_x = (viewport.width - width * zoom) / 2.0;

    let nodes: Vec<NodeBox> = (0..n)
        .map(|v| NodeBox {
            id: tree.node(v).id.clone(),
            kind: tree.node(v).kind,
            x: offset_x + (x[v] - min_x) * zoom,
            y: y[v] * zoom,
            width: w[v] * zoom,
            height: h[v] * zoom,
            scale: scale[v],
            distance: dist[v],
            grayed: grayed[v],
            current: state.is_current(v),
        })
        .collect();

    let edges = tree
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let (p, c) = (&nodes[tree.edge_source(e)], &nodes[tree.edge_target(e)]);
            let (px, py) = (p.x + p.width / 2.0, p.y + p.height);
            let (cx, cy) = (c.x + c.width / 2.0, c.y);
            let mid = (py + cy) / 2.0;
            EdgePath {
                from: edge.from.clone(),
                to: edge.to.clone(),
                answer: edge.answer.clone(),
                symbol: edge.symbol,
                selected: state.is_selected(e),
                label_scale: c.scale,
                points: vec![[px, py], [px, mid], [cx, mid], [cx, cy]],
            }
        })
        .collect();

    Layout {
        viewport,
        zoom,
        bounds: Rect {
            x: offset_x,
            y: 0.0,
            width: width * zoom,
            height: height * zoom,
        },
        nodes,
        edges,
    }
}
