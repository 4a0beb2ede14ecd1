//! A fixed corpus of small graphs covering sinks, lines, loops with and
//! without tails, cycles, a rose with exits and disjoint unions.

/// One vertex, no edges: `K`.
pub const SINK: &str = "vertices: w\n";
/// `u → v`: `M₂(K)`.
pub const LINE: &str = "vertices: u v\nedge h: u -> v\n";
/// Two parallel edges into a sink: `M₃(K)`.
pub const PARALLEL: &str = "vertices: u v\nedge a: u -> v\nedge b: u -> v\n";
/// A single loop: `K[x, x⁻¹]`.
pub const LOOP: &str = "vertices: v\nedge l: v -> v\n";
/// A vertex feeding a loop: `M₂(K[x, x⁻¹])`.
pub const TAIL: &str = "vertices: u v\nedge t: u -> v\nedge l: v -> v\n";
/// A 2-cycle: `M₂(K[x, x⁻¹])`.
pub const CYC2: &str = "vertices: u v\nedge f: u -> v\nedge g: v -> u\n";
/// One vertex with two loops; every cycle has an exit.
pub const ROSE2: &str = "vertices: v\nedge a: v -> v\nedge b: v -> v\n";
/// Disjoint sink and loop: `K ⊕ K[x, x⁻¹]`.
pub const SINK_LOOP: &str = "vertices: w v\nedge l: v -> v\n";
/// A 3-cycle entered by a tail: `M₄(K[x, x⁻¹])`.
pub const CYC3_TAIL: &str =
    "vertices: s a b c\nedge i: s -> a\nedge p: a -> b\nedge q: b -> c\nedge r: c -> a\n";
/// A loop with an edge leaving it.
pub const LOOP_EXIT: &str = "vertices: v w\nedge l: v -> v\nedge o: v -> w\n";

/// `(name, DSL text)` for every corpus graph.
pub const ALL: [(&str, &str); 10] = [
    ("sink", SINK),
    ("line", LINE),
    ("parallel", PARALLEL),
    ("loop", LOOP),
    ("tail", TAIL),
    ("cyc2", CYC2),
    ("rose2", ROSE2),
    ("sink_loop", SINK_LOOP),
    ("cyc3_tail", CYC3_TAIL),
    ("loop_exit", LOOP_EXIT),
];

/// Corpus graphs without exits.
pub fn no_exit() -> impl Iterator<Item = (&'static str, &'static str)> {
    ALL.into_iter()
        .filter(|(name, _)| !matches!(*name, "rose2" | "loop_exit"))
}
