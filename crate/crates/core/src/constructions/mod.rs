//! Named constructions: the Theorem A reflection bundle, the form families,
//! the forms `f + <a>`, the 120-cell Gram data and commensurability
//! certificates.

mod commensurability;
mod families;
mod theorem_a;

pub use commensurability::{
    pairwise_noncommensurable, similarity_certificate, verify_pair_certificate, CertificateKind, Mismatch,
    PairCertificate, PairStatus, PairVerdict,
};
pub use families::{
    bowditch_mess_gram, condition_star_check, family_form, gps_form, is_nonuniform, sqrt5, ArithmeticFlag, FamilyForm,
    Flavor, GpsForm,
};
pub use theorem_a::{all_passed, build_theorem_a_witness, q3_to_g_basis, theorem_a_checks, Check, TheoremAWitness};
