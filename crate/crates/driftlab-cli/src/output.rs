//! Stable machine-readable output shapes.
//!
//! Every artifact carries `"schema": 1`. Rationals render as `p/q` text,
//! enclosures as midpoint/radius decimals with their precision bits, and
//! roots of unity as `{t, n}`. Field order is fixed by the struct
//! definitions so identical inputs produce byte-identical output.

use num_rational::BigRational;
use serde::Serialize;

use driftlab::ball::Ball;
use driftlab::counting::{Quintuple, ScanReport};
use driftlab::drift_div_q::WitnessFamily;
use driftlab::drift_div_qm1::{AsymptoticProfile, Certificate};
use driftlab::unity::UnityRoot;

pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Serialize)]
pub struct BallDto {
    pub mid: String,
    pub rad: String,
    pub bits: u32,
}

impl BallDto {
    pub fn of(b: &Ball) -> Self {
        BallDto {
            mid: b.decimal_mid(40),
            rad: b.decimal_rad(3),
            bits: b.bits(),
        }
    }
}

#[derive(Serialize)]
pub struct RootDto {
    pub t: u64,
    pub n: u64,
}

impl RootDto {
    pub fn of(r: &UnityRoot) -> Self {
        RootDto {
            t: r.numerator(),
            n: r.order(),
        }
    }
}

#[derive(Serialize)]
pub struct QuintupleDto {
    pub q: u64,
    pub a: u64,
    pub d: u64,
    pub j: u64,
    pub m: u64,
    pub case: String,
}

impl QuintupleDto {
    pub fn of(p: &Quintuple) -> Self {
        QuintupleDto {
            q: p.q(),
            a: p.a(),
            d: p.d(),
            j: p.j(),
            m: p.m(),
            case: p.case_tag().to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyDto {
    pub schema: u32,
    pub kind: &'static str,
    pub q: u64,
    pub d: u64,
    pub case: String,
}

#[derive(Serialize)]
pub struct CountDto {
    pub schema: u32,
    pub kind: &'static str,
    pub quintuple: QuintupleDto,
    pub n: String,
    pub algorithm: String,
    pub count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
}

#[derive(Serialize)]
pub struct LambdaDto {
    pub schema: u32,
    pub kind: &'static str,
    pub q: u64,
    pub m: u64,
    pub lambda: BallDto,
    pub below_one: bool,
}

#[derive(Serialize)]
pub struct ScanDto {
    pub schema: u32,
    pub kind: &'static str,
    pub quintuple: QuintupleDto,
    pub n_max: u64,
    pub sign_changes: u64,
    pub min_g: String,
    pub argmin_n: u64,
    pub max_g: String,
    pub argmax_n: u64,
    pub lambda: Option<BallDto>,
    pub empirical_envelope: Option<f64>,
}

impl ScanDto {
    pub fn of(r: &ScanReport) -> Self {
        ScanDto {
            schema: 1,
            kind: "scan",
            quintuple: QuintupleDto::of(&r.quintuple),
            n_max: r.n_max,
            sign_changes: r.sign_changes,
            min_g: rational(&r.min_g),
            argmin_n: r.argmin_n,
            max_g: rational(&r.max_g),
            argmax_n: r.argmax_n,
            lambda: r.lambda.as_ref().map(BallDto::of),
            empirical_envelope: r.empirical_envelope,
        }
    }
}

#[derive(Serialize)]
pub struct RecipeDto {
    pub description: String,
    pub published_g: String,
    pub matches_oracle: bool,
    pub validated_constraint: Option<String>,
}

#[derive(Serialize)]
pub struct WitnessDto {
    pub schema: u32,
    pub kind: &'static str,
    pub quintuple: QuintupleDto,
    pub sign: String,
    pub eps1: u64,
    pub eps0: u64,
    pub s_classes: Option<Vec<u64>>,
    pub predicted_g: String,
    pub members: Vec<u64>,
    pub recipe: Option<RecipeDto>,
}

impl WitnessDto {
    pub fn of(w: &WitnessFamily) -> Self {
        WitnessDto {
            schema: 1,
            kind: "witness",
            quintuple: QuintupleDto::of(&w.quintuple),
            sign: w.sign.to_string(),
            eps1: w.eps1,
            eps0: w.eps0,
            s_classes: w.s_classes.clone(),
            predicted_g: rational(&w.predicted_g),
            members: w.members.clone(),
            recipe: w.recipe.as_ref().map(|p| RecipeDto {
                description: p.description.clone(),
                published_g: rational(&p.published_g),
                matches_oracle: p.matches_oracle,
                validated_constraint: p.validated_constraint.clone(),
            }),
        }
    }
}

#[derive(Serialize)]
pub struct TermDto {
    pub omega: RootDto,
    pub eps: RootDto,
    pub weight: RootDto,
    pub arg_over_pi: String,
    pub magnitude: BallDto,
}

#[derive(Serialize)]
pub struct CprimeDto {
    pub k: u64,
    pub re: BallDto,
    pub im: BallDto,
}

#[derive(Serialize)]
pub struct ProfileDto {
    pub schema: u32,
    pub kind: &'static str,
    pub quintuple: QuintupleDto,
    pub terms_total: usize,
    pub zero_terms: usize,
    pub r: BallDto,
    pub h: usize,
    pub r2: BallDto,
    pub m_period: u64,
    pub k1: u64,
    pub k2: u64,
    pub c1_abs: BallDto,
    pub c2: BallDto,
    pub maximal_terms: Vec<TermDto>,
    pub cprime: Vec<CprimeDto>,
    pub bits: u32,
}

impl ProfileDto {
    pub fn of(p: &AsymptoticProfile) -> Self {
        ProfileDto {
            schema: 1,
            kind: "profile",
            quintuple: QuintupleDto::of(&p.quintuple),
            terms_total: p.terms.len(),
            zero_terms: p.terms.iter().filter(|t| t.is_zero).count(),
            r: BallDto::of(&p.r),
            h: p.h,
            r2: BallDto::of(&p.r2),
            m_period: p.m_period,
            k1: p.k1,
            k2: p.k2,
            c1_abs: BallDto::of(&p.c1_abs),
            c2: BallDto::of(&p.c2),
            maximal_terms: p
                .maximal
                .iter()
                .map(|&i| {
                    let t = &p.terms[i];
                    TermDto {
                        omega: RootDto::of(&t.omega),
                        eps: RootDto::of(&t.eps),
                        weight: RootDto::of(&t.weight),
                        arg_over_pi: rational(t.arg_over_pi.as_ref().expect("maximal is nonzero")),
                        magnitude: BallDto::of(&t.magnitude),
                    }
                })
                .collect(),
            cprime: p
                .cprime
                .iter()
                .enumerate()
                .map(|(k, c)| CprimeDto {
                    k: k as u64,
                    re: BallDto::of(&c.re),
                    im: BallDto::of(&c.im),
                })
                .collect(),
            bits: p.bits,
        }
    }
}

#[derive(Serialize)]
pub struct VerifiedDto {
    pub k: u32,
    pub count: String,
    pub deviation: String,
    pub sign: i8,
    pub residue: u64,
    pub dp_checked: bool,
}

#[derive(Serialize)]
pub struct CertificateDto {
    pub schema: u32,
    pub kind: &'static str,
    pub quintuple: QuintupleDto,
    pub m_period: u64,
    pub k1: u64,
    pub k2: u64,
    pub k_star: u32,
    pub r: BallDto,
    pub r2: BallDto,
    pub c1_abs: BallDto,
    pub c2: BallDto,
    pub claim: String,
    pub verified: Vec<VerifiedDto>,
    pub bits: u32,
}

impl CertificateDto {
    pub fn of(c: &Certificate) -> Self {
        CertificateDto {
            schema: 1,
            kind: "certificate",
            quintuple: QuintupleDto::of(&c.quintuple),
            m_period: c.m_period,
            k1: c.k1,
            k2: c.k2,
            k_star: c.k_star,
            r: BallDto::of(&c.r),
            r2: BallDto::of(&c.r2),
            c1_abs: BallDto::of(&c.c1_abs),
            c2: BallDto::of(&c.c2),
            claim: format!(
                "for k ≥ {} : deviation < 0 when k ≡ {} (mod {}), deviation > 0 when k ≡ {} (mod {})",
                c.k_star, c.k1, c.m_period, c.k2, c.m_period
            ),
            verified: c
                .verified
                .iter()
                .map(|v| VerifiedDto {
                    k: v.k,
                    count: v.count.to_string(),
                    deviation: rational(&v.deviation),
                    sign: v.sign,
                    residue: v.residue,
                    dp_checked: v.dp_checked,
                })
                .collect(),
            bits: c.bits,
        }
    }
}
