//! Hash-consed subformula closure.
//!
//! Every distinct subformula gets one [`NodeId`]; children always have
//! smaller ids than their parents, so iterating ids in order is a valid
//! bottom-up traversal.

use std::collections::HashMap;

use crate::formula::{Atom, Core};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom(AtomId),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Implies(NodeId, NodeId),
    Iff(NodeId, NodeId),
    Next(NodeId),
    Yesterday(NodeId),
    Zeta(NodeId),
    Until(NodeId, NodeId),
    Since(NodeId, NodeId),
    Release(NodeId, NodeId),
    Trigger(NodeId, NodeId),
}

/// Which partition of the closure a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tense {
    Prop,
    Bool,
    Future,
    Past,
}

impl Node {
    pub fn tense(&self) -> Tense {
        match self {
            Node::Atom(_) => Tense::Prop,
            Node::True
            | Node::False
            | Node::Not(_)
            | Node::And(_)
            | Node::Or(_)
            | Node::Implies(..)
            | Node::Iff(..) => Tense::Bool,
            Node::Next(_) | Node::Until(..) | Node::Release(..) => Tense::Future,
            Node::Yesterday(_) | Node::Zeta(_) | Node::Since(..) | Node::Trigger(..) => Tense::Past,
        }
    }

    pub fn children(&self) -> Vec<NodeId> {
        match self {
            Node::True | Node::False | Node::Atom(_) => vec![],
            Node::Not(a) | Node::Next(a) | Node::Yesterday(a) | Node::Zeta(a) => vec![*a],
            Node::And(v) | Node::Or(v) => v.clone(),
            Node::Implies(a, b)
            | Node::Iff(a, b)
            | Node::Until(a, b)
            | Node::Since(a, b)
            | Node::Release(a, b)
            | Node::Trigger(a, b) => vec![*a, *b],
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Closure {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    atoms: Vec<Atom>,
    atom_index: HashMap<Atom, AtomId>,
}

impl Closure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom_id(&mut self, atom: &Atom) -> AtomId {
        if let Some(&id) = self.atom_index.get(atom) {
            return id;
        }
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push(atom.clone());
        self.atom_index.insert(atom.clone(), id);
        id
    }

    pub fn find_atom(&self, atom: &Atom) -> Option<AtomId> {
        self.atom_index.get(atom).copied()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.0 as usize]
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn add(&mut self, f: &Core) -> NodeId {
        let node = match f {
            Core::True => Node::True,
            Core::False => Node::False,
            Core::Atom(a) => Node::Atom(self.atom_id(a)),
            Core::Not(a) => Node::Not(self.add(a)),
            Core::And(fs) => Node::And(fs.iter().map(|g| self.add(g)).collect()),
            Core::Or(fs) => Node::Or(fs.iter().map(|g| self.add(g)).collect()),
            Core::Implies(a, b) => Node::Implies(self.add(a), self.add(b)),
            Core::Iff(a, b) => Node::Iff(self.add(a), self.add(b)),
            Core::Next(a) => Node::Next(self.add(a)),
            Core::Yesterday(a) => Node::Yesterday(self.add(a)),
            Core::Zeta(a) => Node::Zeta(self.add(a)),
            Core::Until(a, b) => Node::Until(self.add(a), self.add(b)),
            Core::Since(a, b) => Node::Since(self.add(a), self.add(b)),
            Core::Release(a, b) => Node::Release(self.add(a), self.add(b)),
            Core::Trigger(a, b) => Node::Trigger(self.add(a), self.add(b)),
        };
        self.intern(node)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// Node ids of one partition.
    pub fn partition(&self, tense: Tense) -> Vec<NodeId> {
        self.ids().filter(|&id| self.node(id).tense() == tense).collect()
    }

    /// Nesting depth (future, past) of the subformula rooted at `id`.
    pub fn depth(&self, id: NodeId) -> (usize, usize) {
        let mut memo = vec![None; self.nodes.len()];
        self.depth_memo(id, &mut memo)
    }

    fn depth_memo(&self, id: NodeId, memo: &mut Vec<Option<(usize, usize)>>) -> (usize, usize) {
        if let Some(d) = memo[id.index()] {
            return d;
        }
        let node = self.node(id);
        let (mut f, mut p) = (0, 0);
        for c in node.children() {
            let (cf, cp) = self.depth_memo(c, memo);
            f = f.max(cf);
            p = p.max(cp);
        }
        let d = match node.tense() {
            Tense::Future => (f + 1, p),
            Tense::Past => (f, p + 1),
            _ => (f, p),
        };
        memo[id.index()] = Some(d);
        d
    }
}
