//! Incremental evaluation of the trace functions along a prefix.
//!
//! A [`Prefix`] holds, for one trace α, the vectors of per-domain values
//! (one entry per domain). Extending by an action needs the old vectors for
//! `ta`/`to` and the new views for `ito`, which is why every domain is
//! tracked at once.

use crate::model::{ActionId, StateId, System};

use super::cons::{ConsTable, InfoTree, Mid, SeqId, ViewItem};

/// Which components a [`Prefix`] maintains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Track(u8);

impl Track {
    /// Only the current state.
    pub const STATE: Track = Track(0);
    pub const PURGE: Track = Track(1);
    pub const VIEW: Track = Track(2);
    pub const TVIEW: Track = Track(4 | 2);
    pub const FTVIEW: Track = Track(8 | 2);
    pub const TA: Track = Track(16);
    pub const TO: Track = Track(32 | 2);
    pub const ITO: Track = Track(64 | 2);
    pub const ALL: Track = Track(127);

    pub fn union(self, other: Track) -> Track {
        Track(self.0 | other.0)
    }

    fn has(self, bit: u8) -> bool {
        self.0 & bit != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub state: StateId,
    pub len: usize,
    pub purge: Vec<SeqId>,
    pub view: Vec<SeqId>,
    pub tview: Vec<SeqId>,
    pub ftview: Vec<SeqId>,
    pub ta: Vec<InfoTree>,
    pub to: Vec<InfoTree>,
    pub ito: Vec<InfoTree>,
}

impl Prefix {
    /// Values for the empty trace.
    pub fn initial(sys: &System, table: &mut ConsTable, track: Track) -> Prefix {
        let nd = sys.num_domains();
        let s0 = sys.initial();
        let mut p = Prefix {
            state: s0,
            len: 0,
            purge: Vec::new(),
            view: Vec::new(),
            tview: Vec::new(),
            ftview: Vec::new(),
            ta: Vec::new(),
            to: Vec::new(),
            ito: Vec::new(),
        };
        if track.has(1) {
            p.purge = vec![SeqId::EMPTY; nd];
        }
        if track.has(2) {
            p.view = sys
                .domains()
                .map(|u| table.views.push(SeqId::EMPTY, ViewItem::Obs(sys.obs(s0, u))))
                .collect();
        }
        if track.has(4) {
            p.tview = vec![SeqId::EMPTY; nd];
        }
        if track.has(8) {
            p.ftview = p.view.clone();
        }
        if track.has(16) {
            p.ta = vec![table.epsilon(); nd];
        }
        if track.has(32) {
            p.to = p.view.iter().map(|v| table.leaf(*v)).collect();
        }
        if track.has(64) {
            p.ito = p.view.iter().map(|v| table.leaf(*v)).collect();
        }
        p
    }

    /// Values for `α·a`, given the values for `α`.
    pub fn extend(&self, sys: &System, table: &mut ConsTable, track: Track, a: ActionId) -> Prefix {
        let policy = sys.policy();
        let da = sys.dom(a);
        let t = sys.step(self.state, a);
        let mut next = Prefix {
            state: t,
            len: self.len + 1,
            purge: self.purge.clone(),
            view: Vec::new(),
            tview: self.tview.clone(),
            ftview: self.ftview.clone(),
            ta: self.ta.clone(),
            to: self.to.clone(),
            ito: self.ito.clone(),
        };
        if track.has(1) {
            for u in policy.image_of(da).iter() {
                next.purge[u.index()] = table.words.push(self.purge[u.index()], a);
            }
        }
        if track.has(2) {
            next.view = self.view.clone();
            let own = table.views.push(self.view[da.index()], ViewItem::Action(a));
            for u in sys.domains() {
                let base = if u == da { own } else { self.view[u.index()] };
                next.view[u.index()] = table.absorb(base, sys.obs(t, u));
            }
            if track.has(4) {
                next.tview[da.index()] = own;
            }
            if track.has(8) {
                next.ftview[da.index()] = next.view[da.index()];
            }
        }
        for u in policy.image_of(da).iter() {
            let i = u.index();
            if track.has(16) {
                next.ta[i] = table.node(self.ta[i], Mid::Tree(self.ta[da.index()]), a);
            }
            if track.has(32) {
                next.to[i] = table.node(self.to[i], Mid::View(self.view[da.index()]), a);
            }
            if track.has(64) {
                let mid = if u == da { self.view[i] } else { next.view[da.index()] };
                next.ito[i] = table.node(self.ito[i], Mid::View(mid), a);
            }
        }
        next
    }

    /// Values for a whole trace.
    pub fn of(sys: &System, table: &mut ConsTable, track: Track, alpha: &[ActionId]) -> Prefix {
        let mut p = Prefix::initial(sys, table, track);
        for a in alpha {
            p = p.extend(sys, table, track, *a);
        }
        p
    }
}
