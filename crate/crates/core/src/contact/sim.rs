use rand::Rng;

use super::fenwick::Fenwick;
use super::{check_params, ContactError, ExtinctionRecord, InitialSet};
use crate::graph::Graph;
use crate::rng::open_unit;

/// Events between full recounts of the incremental bookkeeping in debug
/// builds.
pub const RECOUNT_INTERVAL: u64 = 1 << 20;

/// Infected set with per-vertex infected-neighbour counts.
///
/// Healthy vertices carry their count in a Fenwick tree, so the total
/// infection pressure and proportional sampling are exact integer operations.
#[derive(Debug, Clone)]
pub struct InfectionState<'g> {
    g: &'g Graph,
    infected: Vec<bool>,
    list: Vec<u32>,
    pos: Vec<u32>,
    count: Vec<u32>,
    pressure: Fenwick,
}

impl<'g> InfectionState<'g> {
    pub fn new(g: &'g Graph, init: &InitialSet) -> Self {
        let n = g.n();
        let mut s = InfectionState {
            g,
            infected: vec![false; n],
            list: Vec::new(),
            pos: vec![u32::MAX; n],
            count: vec![0; n],
            pressure: Fenwick::new(n),
        };
        match init {
            InitialSet::Full => {
                for v in 0..n as u32 {
                    s.infected[v as usize] = true;
                    s.pos[v as usize] = v;
                    s.list.push(v);
                    s.count[v as usize] = g.degree(v) as u32;
                }
            }
            InitialSet::Vertices(set) => {
                for v in set.iter() {
                    s.infect(v);
                }
            }
        }
        s
    }

    pub fn infected_count(&self) -> usize {
        self.list.len()
    }

    pub fn is_infected(&self, v: u32) -> bool {
        self.infected[v as usize]
    }

    /// `Σ` over healthy `v` of the number of infected neighbours of `v`.
    pub fn pressure(&self) -> u64 {
        self.pressure.total()
    }

    pub fn infected_neighbors(&self, v: u32) -> u32 {
        self.count[v as usize]
    }

    pub fn infect(&mut self, v: u32) {
        let vi = v as usize;
        debug_assert!(!self.infected[vi]);
        self.infected[vi] = true;
        self.pos[vi] = self.list.len() as u32;
        self.list.push(v);
        self.pressure.add(vi, -(self.count[vi] as i64));
        for &u in self.g.neighbors(v) {
            self.count[u as usize] += 1;
            if !self.infected[u as usize] {
                self.pressure.add(u as usize, 1);
            }
        }
    }

    pub fn recover(&mut self, v: u32) {
        let vi = v as usize;
        debug_assert!(self.infected[vi]);
        self.infected[vi] = false;
        let p = self.pos[vi] as usize;
        let last = self.list.pop().unwrap();
        if last != v {
            self.list[p] = last;
            self.pos[last as usize] = p as u32;
        }
        self.pos[vi] = u32::MAX;
        self.pressure.add(vi, self.count[vi] as i64);
        for &u in self.g.neighbors(v) {
            self.count[u as usize] -= 1;
            if !self.infected[u as usize] {
                self.pressure.add(u as usize, -1);
            }
        }
    }

    /// Recomputes every count from scratch and compares with the incremental
    /// values.
    pub fn verify(&self) -> Result<(), String> {
        let mut pressure = 0u64;
        for v in 0..self.g.n() as u32 {
            let c = self.g.neighbors(v).iter().filter(|&&u| self.infected[u as usize]).count() as u32;
            if c != self.count[v as usize] {
                return Err(format!("vertex {v}: count {} but recount {c}", self.count[v as usize]));
            }
            if !self.infected[v as usize] {
                pressure += c as u64;
            }
        }
        if pressure != self.pressure() {
            return Err(format!("pressure {} but recount {pressure}", self.pressure()));
        }
        let listed = self.list.iter().filter(|&&v| self.infected[v as usize]).count();
        let flagged = self.infected.iter().filter(|&&b| b).count();
        if listed != self.list.len() || flagged != listed {
            return Err("infected list out of sync".into());
        }
        Ok(())
    }
}

/// Compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// One run until extinction or `t_max`. The returned record has `replica`
/// and `seed` set to 0.
pub fn simulate<R: Rng + ?Sized>(
    g: &Graph,
    lambda: f64,
    init: &InitialSet,
    t_max: f64,
    rng: &mut R,
) -> Result<ExtinctionRecord, ContactError> {
    check_params(lambda, t_max)?;
    if let InitialSet::Vertices(s) = init {
        if s.universe() != g.n() {
            return Err(ContactError::InvalidArgument(format!(
                "initial set over {} vertices for a graph with {}",
                s.universe(),
                g.n()
            )));
        }
    }
    let mut state = InfectionState::new(g, init);
    let mut rec = ExtinctionRecord {
        replica: 0,
        seed: 0,
        tau: 0.0,
        censored: false,
        events: 0,
        peak_infected: state.infected_count() as u32,
    };
    let mut t = Kahan::default();
    loop {
        let infected = state.infected_count();
        if infected == 0 {
            rec.tau = t.sum;
            return Ok(rec);
        }
        let pressure = state.pressure();
        let rate = infected as f64 + lambda * pressure as f64;
        let dt = -open_unit(rng).ln() / rate;
        if t.sum + dt >= t_max {
            rec.tau = t_max;
            rec.censored = true;
            return Ok(rec);
        }
        t.add(dt);
        rec.events += 1;
        if pressure == 0 || rng.random::<f64>() * rate < infected as f64 {
            let v = state.list[rng.random_range(0..infected)];
            state.recover(v);
        } else {
            let v = state.pressure.find(rng.random_range(0..pressure)) as u32;
            state.infect(v);
            rec.peak_infected = rec.peak_infected.max(state.infected_count() as u32);
        }
        if cfg!(debug_assertions) && rec.events.is_multiple_of(RECOUNT_INTERVAL) {
            if let Err(e) = state.verify() {
                panic!("bookkeeping drift after {} events: {e}", rec.events);
            }
        }
    }
}
