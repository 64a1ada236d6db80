//! Choosing the extension class of `0 → U_{-1} → E_2^{1,2} → k(-1)[1] → 0`.
//!
//! The class is not computed here: whether it vanishes depends on Hodge
//! cohomology outside the reach of the pipeline. The default policy records
//! it as nonzero, in which case the middle term is the cone of a nonzero map
//! `k(-1) → U_{-1}` and is realized explicitly as `U_0`.

use std::fmt;
use std::str::FromStr;

use rmod_core::{cone_or_extension, CoreError, ExtensionOutcome, FormalObject, GaloisRing};

use crate::error::{BalphapError, Result};

/// Recorded with every nonsplit resolution.
pub const NONSPLIT_PROVENANCE: &str =
    "recorded fact: the extension is nonsplit (imported from the Hodge cohomology of B alpha_p, not computed)";

/// Watermark for split-mode reports.
pub const COUNTERFACTUAL: &str = "counterfactual";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ExtensionPolicy {
    #[default]
    PaperNonsplit,
    Split,
}

impl FromStr for ExtensionPolicy {
    type Err = BalphapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-nonsplit" => Ok(ExtensionPolicy::PaperNonsplit),
            "split" => Ok(ExtensionPolicy::Split),
            other => Err(BalphapError::UnknownPolicy(other.to_string())),
        }
    }
}

impl fmt::Display for ExtensionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionPolicy::PaperNonsplit => "paper-nonsplit",
            ExtensionPolicy::Split => "split",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ResolvedExtension {
    pub policy: ExtensionPolicy,
    /// `E_2^{1,2}` as a formal object.
    pub object: FormalObject,
    pub provenance: Option<&'static str>,
    /// Whether the cone was matched with `U_0` by an explicit isomorphism.
    pub cone_verified: bool,
}

impl ResolvedExtension {
    pub fn watermark(&self) -> Option<&'static str> {
        (self.policy == ExtensionPolicy::Split).then_some(COUNTERFACTUAL)
    }
}

/// Depth at which the cone is compared with `U_0`.
const CONE_DEPTH: u32 = 6;

/// `E_2^{1,2}` under `policy`.
pub fn resolve_extension(policy: ExtensionPolicy, p: u64) -> Result<ResolvedExtension> {
    let ring = GaloisRing::new(p, 1, 2).map_err(CoreError::from)?;
    let lambda = match policy {
        ExtensionPolicy::PaperNonsplit => ring.one(),
        ExtensionPolicy::Split => ring.zero(),
    };
    let out = cone_or_extension(&ring, lambda, CONE_DEPTH)?;
    let cone_verified = matches!(&out, ExtensionOutcome::Cone { iso: Some(_), .. });
    if policy == ExtensionPolicy::PaperNonsplit && !cone_verified {
        return Err(BalphapError::Failed("the cone of k(-1) → U_{-1} did not match U_0".into()));
    }
    Ok(ResolvedExtension {
        policy,
        object: out.object().clone(),
        provenance: (policy == ExtensionPolicy::PaperNonsplit).then_some(NONSPLIT_PROVENANCE),
        cone_verified,
    })
}

/// [`resolve_extension`] from a policy name.
pub fn resolve_extension_named(policy: &str, p: u64) -> Result<ResolvedExtension> {
    resolve_extension(policy.parse()?, p)
}
