//! Exact computations in `SL_n` over truncated complete discrete valuation rings.
//!
//! * [`localring`]: `Z/p^N` and `F_p[t]/(t^N)` with valuations and inverses.
//! * [`hensel`]: Newton lifting of polynomial roots, fourth-root witnesses.
//! * [`matgroup`]: elementary unipotent words, factorizations of `SL_n`, commutator identities.
//! * [`congruence`]: finite quotients `SL_n(Z/p^m)`, subgroup indices and abelianizations.
//! * [`flags`]: exact rational flags fixed by unipotent matrix sets.
//! * [`oracle`] and [`golden`]: brute-force reference values and the fixtures pinned from them.
//! * [`suite`]: the end-to-end lemma checks behind `slo verify-paper`.

pub mod localring;
pub mod hensel;
pub mod matgroup;
pub mod congruence;
pub mod flags;
pub mod oracle;
pub mod golden;
pub mod suite;

pub use hensel::{fourth_root_witness, hensel_lift, HenselError, Polynomial, RootWitness};
pub use localring::{
    additive_subgroup_level, make_ring, Characteristic, RingDescriptor, RingElem, RingError,
    Valuation,
};
pub use matgroup::{
    decompose_sl2, decompose_sln, el_diagonal_word, ElementaryWord, IdentityReport, Letter,
    MatError, RMatrix,
};
pub use congruence::{
    abelianization, el_image_index, nontrivial_rep, Abelianization, CongruenceError, FiniteGroup,
    FiniteMat, MatSpace, RepDescription,
};
pub use flags::{hyperplane_bound_check, jh_series, Flag, FlagError, QMatrix, Subspace};
pub use suite::{Outcome, SuiteConfig};
