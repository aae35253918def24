//! Exact arithmetic for genus-2 translation surfaces.
//!
//! Everything here happens over the real quadratic field Q(√d): surfaces are
//! polygons with Q(√d)² vertices glued by translations, and the questions the
//! crate answers (is a direction periodic? is the surface Veech? how many
//! cylinder tuples realize a given area?) are all decided with exact rational
//! arithmetic. No floating point is ever on a decision path; floats appear
//! only in SVG output.
//!
//! The layers, bottom up:
//!
//! * [`qfield`] — elements a + b√d with rational a, b: ordering, conjugation,
//!   algebraic-integer tests, fundamental units.
//! * [`tensor`] — the rank-1 wedge (R ∧_Q R) and rank-4 tensor (R ⊗_Q R)
//!   coordinate models used by the invariant projections.
//! * [`surface`] — polygons, gluings, stratum detection, holonomy, the
//!   GL(2) action.
//! * [`jinvariant`] — the translation scissors invariant J and its
//!   projections, including directional forms.
//! * [`cylinder`] — canonical two- and three-cylinder builders, exact
//!   separatrix tracing, twist measurement.
//! * [`classify`] — the cylinder-equation tests, Property X scans, Veech and
//!   complete-periodicity verdicts.
//! * [`enumerate`] — exhaustive search for cylinder tuples with fixed area
//!   constant, modulo the unit group, with a brute-force cross-check.
//!
//! The `book/` directory of the repository walks through the same material as
//! a narrative guide; its code snippets are compiled as doctests via the
//! [`guide`] module, so the book cannot drift from the library.

pub mod classify;
pub mod cylinder;
pub mod enumerate;
pub mod guide;
pub mod jinvariant;
pub mod json;
pub mod qfield;
pub mod surface;
pub mod svg;
pub mod tensor;

pub use qfield::{FieldDesc, QElem, Rat};
pub use surface::{Polygon, StratumInfo, Surface, Vec2Q};
