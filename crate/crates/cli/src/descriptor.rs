//! Compact set descriptors.
//!
//! Sets on the unit sphere: `sphere:n`, `cap:n:theta`, `subsphere:n:m`.
//! Gaussian sets in R^d: `halfspace:d:u` (or `halfspace:u` with d = 1),
//! `ball:d:rho`, `origin:d`, `fullspace:d`.

use std::str::FromStr;

use gkf_core::gaussian_volumes::GaussSet;
use gkf_core::ModelSet;

use crate::error::CliError;

fn fields(s: &str) -> (String, Vec<&str>) {
    let mut it = s.trim().split(':');
    let head = it.next().unwrap_or_default().to_ascii_lowercase();
    (head, it.collect())
}

fn parse_field<T: FromStr>(desc: &str, name: &str, raw: &str) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::Descriptor(desc.into(), format!("{name} = `{raw}` is not a valid number")))
}

fn arity(desc: &str, args: &[&str], want: &[usize]) -> Result<(), CliError> {
    if want.contains(&args.len()) {
        Ok(())
    } else {
        Err(CliError::Descriptor(
            desc.into(),
            format!("expected {want:?} fields after the kind, got {}", args.len()),
        ))
    }
}

/// A set on the unit sphere S^n.
pub fn parse_unit_set(desc: &str) -> Result<ModelSet, CliError> {
    let (kind, args) = fields(desc);
    let set = match kind.as_str() {
        "sphere" => {
            arity(desc, &args, &[1])?;
            ModelSet::UnitSphere { n: parse_field(desc, "n", args[0])? }
        }
        "cap" => {
            arity(desc, &args, &[2])?;
            ModelSet::UnitCap {
                n: parse_field(desc, "n", args[0])?,
                theta: parse_field(desc, "theta", args[1])?,
            }
        }
        "subsphere" => {
            arity(desc, &args, &[2])?;
            ModelSet::UnitGreatSubsphere {
                n: parse_field(desc, "n", args[0])?,
                m: parse_field(desc, "m", args[1])?,
            }
        }
        _ => return Err(CliError::Descriptor(desc.into(), "expected sphere, cap or subsphere".into())),
    };
    set.validate()?;
    Ok(set)
}

/// A Gaussian test set in R^d.
pub fn parse_gauss_set(desc: &str) -> Result<GaussSet, CliError> {
    let (kind, args) = fields(desc);
    let set = match kind.as_str() {
        "halfspace" => {
            arity(desc, &args, &[1, 2])?;
            if args.len() == 1 {
                GaussSet::HalfSpace { d: 1, u: parse_field(desc, "u", args[0])? }
            } else {
                GaussSet::HalfSpace {
                    d: parse_field(desc, "d", args[0])?,
                    u: parse_field(desc, "u", args[1])?,
                }
            }
        }
        "ball" => {
            arity(desc, &args, &[2])?;
            GaussSet::CenteredBall {
                d: parse_field(desc, "d", args[0])?,
                rho: parse_field(desc, "rho", args[1])?,
            }
        }
        "origin" => {
            arity(desc, &args, &[1])?;
            GaussSet::Origin { d: parse_field(desc, "d", args[0])? }
        }
        "fullspace" => {
            arity(desc, &args, &[1])?;
            GaussSet::FullSpace { d: parse_field(desc, "d", args[0])? }
        }
        _ => {
            return Err(CliError::Descriptor(
                desc.into(),
                "expected halfspace, ball, origin or fullspace".into(),
            ))
        }
    };
    set.validate()?;
    Ok(set)
}
