//! Hash-consed sequences and information trees.
//!
//! Sequences are interned as cons cells `(prefix, last)` so that extending a
//! sequence by one element is a single table lookup and equal sequences get
//! equal ids. Trees are interned bottom-up: children are already ids, so
//! the derived `Eq` on a node is a full structural check on hash match.

use std::collections::HashMap;
use std::hash::Hash;

use crate::model::{ActionId, ObsId, System};

/// Id of an interned sequence. `SeqId::EMPTY` is the empty sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqId(pub u32);

impl SeqId {
    pub const EMPTY: SeqId = SeqId(0);
}

/// Interns sequences over `T` as cons cells.
#[derive(Clone, Debug)]
pub struct SeqInterner<T> {
    // cell of id k (k ≥ 1) lives at k-1
    cells: Vec<(SeqId, T)>,
    lens: Vec<u32>,
    index: HashMap<(SeqId, T), SeqId>,
}

impl<T: Copy + Eq + Hash> Default for SeqInterner<T> {
    fn default() -> Self {
        SeqInterner { cells: Vec::new(), lens: Vec::new(), index: HashMap::new() }
    }
}

impl<T: Copy + Eq + Hash> SeqInterner<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, prefix: SeqId, item: T) -> SeqId {
        if let Some(id) = self.index.get(&(prefix, item)) {
            return *id;
        }
        let id = SeqId(self.cells.len() as u32 + 1);
        self.cells.push((prefix, item));
        self.lens.push(self.len(prefix) as u32 + 1);
        self.index.insert((prefix, item), id);
        id
    }

    pub fn intern(&mut self, items: &[T]) -> SeqId {
        items.iter().fold(SeqId::EMPTY, |acc, x| self.push(acc, *x))
    }

    pub fn last(&self, id: SeqId) -> Option<T> {
        if id == SeqId::EMPTY {
            None
        } else {
            Some(self.cells[id.0 as usize - 1].1)
        }
    }

    pub fn parent(&self, id: SeqId) -> Option<SeqId> {
        if id == SeqId::EMPTY {
            None
        } else {
            Some(self.cells[id.0 as usize - 1].0)
        }
    }

    pub fn len(&self, id: SeqId) -> usize {
        if id == SeqId::EMPTY {
            0
        } else {
            self.lens[id.0 as usize - 1] as usize
        }
    }

    pub fn to_vec(&self, id: SeqId) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len(id));
        let mut cur = id;
        while let Some((p, x)) = self.parent(cur).zip(self.last(cur)) {
            out.push(x);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Number of distinct non-empty sequences interned so far.
    pub fn size(&self) -> usize {
        self.cells.len()
    }
}

/// One element of a view: an own action or an observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViewItem {
    Action(ActionId),
    Obs(ObsId),
}

/// A view as a plain vector.
pub type View = Vec<ViewItem>;

/// `view ∘ o`: appends `o` unless the view already ends in `o`.
pub fn absorb(view: &mut View, o: ObsId) {
    if view.last() != Some(&ViewItem::Obs(o)) {
        view.push(ViewItem::Obs(o));
    }
}

/// True when no two adjacent elements are the same observation.
pub fn is_stutter_free(view: &[ViewItem]) -> bool {
    view.windows(2).all(|w| !(w[0] == w[1] && matches!(w[0], ViewItem::Obs(_))))
}

/// Handle of a hash-consed information tree. Equal handles from the same
/// [`ConsTable`] denote structurally equal trees and vice versa.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfoTree(pub u32);

/// Middle child of an interior node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mid {
    Tree(InfoTree),
    View(SeqId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeNode {
    /// The ε leaf.
    Epsilon,
    /// A leaf carrying a view.
    Leaf(SeqId),
    Node { left: InfoTree, mid: Mid, label: ActionId },
}

/// Shared interning tables for views, action sequences and trees.
#[derive(Clone, Debug, Default)]
pub struct ConsTable {
    pub views: SeqInterner<ViewItem>,
    pub words: SeqInterner<ActionId>,
    nodes: Vec<TreeNode>,
    index: HashMap<TreeNode, InfoTree>,
}

impl ConsTable {
    pub fn new() -> Self {
        let mut t = ConsTable::default();
        t.tree(TreeNode::Epsilon);
        t
    }

    pub fn epsilon(&self) -> InfoTree {
        InfoTree(0)
    }

    pub fn tree(&mut self, node: TreeNode) -> InfoTree {
        if let Some(id) = self.index.get(&node) {
            return *id;
        }
        let id = InfoTree(self.nodes.len() as u32);
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    pub fn leaf(&mut self, view: SeqId) -> InfoTree {
        self.tree(TreeNode::Leaf(view))
    }

    pub fn node(&mut self, left: InfoTree, mid: Mid, label: ActionId) -> InfoTree {
        self.tree(TreeNode::Node { left, mid, label })
    }

    pub fn get(&self, t: InfoTree) -> TreeNode {
        self.nodes[t.0 as usize]
    }

    pub fn num_trees(&self) -> usize {
        self.nodes.len()
    }

    /// `view ∘ o` on an interned view.
    pub fn absorb(&mut self, view: SeqId, o: ObsId) -> SeqId {
        if self.views.last(view) == Some(ViewItem::Obs(o)) {
            view
        } else {
            self.views.push(view, ViewItem::Obs(o))
        }
    }

    /// Writes a canonical, table-independent encoding of `t` into `out`.
    ///
    /// Shared subtrees are emitted once and referenced by local number, so
    /// the encoding is linear in the DAG size.
    pub fn encode(&self, t: InfoTree, out: &mut Vec<u32>) {
        let mut local: HashMap<InfoTree, u32> = HashMap::new();
        self.encode_rec(t, &mut local, out);
    }

    fn encode_rec(&self, t: InfoTree, local: &mut HashMap<InfoTree, u32>, out: &mut Vec<u32>) {
        if let Some(n) = local.get(&t) {
            out.extend_from_slice(&[0, *n]);
            return;
        }
        match self.get(t) {
            TreeNode::Epsilon => out.push(1),
            TreeNode::Leaf(v) => {
                out.push(2);
                self.encode_view(v, out);
            }
            TreeNode::Node { left, mid, label } => {
                out.extend_from_slice(&[3, label.0]);
                self.encode_rec(left, local, out);
                match mid {
                    Mid::Tree(m) => {
                        out.push(4);
                        self.encode_rec(m, local, out);
                    }
                    Mid::View(v) => {
                        out.push(5);
                        self.encode_view(v, out);
                    }
                }
            }
        }
        let n = local.len() as u32;
        local.insert(t, n);
    }

    fn encode_view(&self, v: SeqId, out: &mut Vec<u32>) {
        let items = self.views.to_vec(v);
        out.push(items.len() as u32);
        for item in items {
            match item {
                ViewItem::Action(a) => out.extend_from_slice(&[0, a.0]),
                ViewItem::Obs(o) => out.extend_from_slice(&[1, o.0]),
            }
        }
    }

    /// Renders a view such as `[0 1 l 1]`.
    pub fn render_view(&self, sys: &System, v: SeqId) -> String {
        render_view(sys, &self.views.to_vec(v))
    }

    /// Renders a tree with `ε` leaves and `(left, mid, label)` nodes.
    pub fn render(&self, sys: &System, t: InfoTree) -> String {
        match self.get(t) {
            TreeNode::Epsilon => "ε".to_string(),
            TreeNode::Leaf(v) => self.render_view(sys, v),
            TreeNode::Node { left, mid, label } => {
                let mid = match mid {
                    Mid::Tree(m) => self.render(sys, m),
                    Mid::View(v) => self.render_view(sys, v),
                };
                format!("({}, {}, {})", self.render(sys, left), mid, sys.action_name(label))
            }
        }
    }
}

pub fn render_view(sys: &System, view: &[ViewItem]) -> String {
    let parts: Vec<&str> = view
        .iter()
        .map(|x| match x {
            ViewItem::Action(a) => sys.action_name(*a),
            ViewItem::Obs(o) => sys.token(*o),
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interned_sequences_share_ids() {
        let mut s: SeqInterner<u8> = SeqInterner::new();
        let a = s.intern(&[1, 2, 3]);
        let b = s.intern(&[1, 2, 3]);
        assert_eq!(a, b);
        assert_eq!(s.to_vec(a), vec![1, 2, 3]);
        assert_eq!(s.len(a), 3);
        assert_ne!(s.intern(&[1, 2]), a);
        assert_eq!(s.size(), 3);
    }

    #[test]
    fn trees_are_consed() {
        let mut t = ConsTable::new();
        let e = t.epsilon();
        let x = t.node(e, Mid::Tree(e), ActionId(0));
        let y = t.node(e, Mid::Tree(e), ActionId(0));
        assert_eq!(x, y);
        let z = t.node(e, Mid::Tree(e), ActionId(1));
        assert_ne!(x, z);
        assert_eq!(t.num_trees(), 3);
    }

    #[test]
    fn encoding_is_table_independent() {
        let mut t1 = ConsTable::new();
        let mut t2 = ConsTable::new();
        // populate t2 with noise first so ids differ
        let v = t2.views.intern(&[ViewItem::Obs(ObsId(4))]);
        t2.leaf(v);
        let build = |t: &mut ConsTable| {
            let e = t.epsilon();
            let n = t.node(e, Mid::Tree(e), ActionId(0));
            t.node(n, Mid::Tree(n), ActionId(1))
        };
        let a = build(&mut t1);
        let b = build(&mut t2);
        assert_ne!(a, b);
        let (mut ea, mut eb) = (Vec::new(), Vec::new());
        t1.encode(a, &mut ea);
        t2.encode(b, &mut eb);
        assert_eq!(ea, eb);
    }

    #[test]
    fn stutter() {
        let mut v = vec![ViewItem::Obs(ObsId(0))];
        absorb(&mut v, ObsId(0));
        assert_eq!(v.len(), 1);
        v.push(ViewItem::Action(ActionId(0)));
        absorb(&mut v, ObsId(0));
        assert_eq!(v.len(), 3);
        assert!(is_stutter_free(&v));
        assert!(!is_stutter_free(&[ViewItem::Obs(ObsId(1)), ViewItem::Obs(ObsId(1))]));
    }
}
