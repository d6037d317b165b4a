//! Human-readable output.

use std::fmt::Write;

use num_complex::Complex64;

use lommel_core::disk::{ConsistencyFlag, ConsistencyReport};
use lommel_core::{
    CriterionReport, DiskGrid, EvalResult, FamilyLabel, NormalizedFunction, ScanRow,
    ThresholdResult,
};

fn describe(f: &NormalizedFunction) -> String {
    let family = match f.family {
        FamilyLabel::Bessel { nu } => format!("bessel nu={nu}"),
        FamilyLabel::Struve { nu } => format!("struve nu={nu}"),
        FamilyLabel::Lommel { mu, nu } => format!("lommel mu={mu} nu={nu}"),
        FamilyLabel::RawPair => "raw pair".to_string(),
    };
    format!(
        "{family} (p={}, q={}, kernel {})",
        f.pair.p(),
        f.pair.q(),
        f.kernel.name()
    )
}

pub fn eval(f: &NormalizedFunction, z: Complex64, order: u32, r: &EvalResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "function     {}", describe(f));
    let _ = writeln!(s, "z            {} {:+}i", z.re, z.im);
    let _ = writeln!(s, "order        {order}");
    if r.value.im == 0.0 {
        let _ = writeln!(s, "value        {}", r.value.re);
    } else {
        let _ = writeln!(s, "value        {} {:+}i", r.value.re, r.value.im);
    }
    let _ = writeln!(s, "tail bound   {:e}", r.tail_bound);
    let _ = writeln!(s, "terms        {}", r.terms_used);
    s
}

pub fn check(f: &NormalizedFunction, r: &CriterionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "function     {}", describe(f));
    let _ = writeln!(s, "class        {}", r.class);
    let _ = writeln!(s, "alpha, beta  {}, {}", r.params.alpha(), r.params.beta());
    let _ = writeln!(s, "sum          {}", r.sum_value);
    let _ = writeln!(s, "closed form  {}", r.closed_form_value);
    let _ = writeln!(s, "threshold    {}", r.threshold);
    let _ = writeln!(s, "margin       {}", r.margin);
    let marker = if r.near_boundary { " (near boundary)" } else { "" };
    let _ = writeln!(s, "verdict      {}{marker}", r.verdict);
    if let Some(p) = &r.paper_rhs_comparison {
        let _ = writeln!(s, "printed closed-form inequality:");
        let _ = writeln!(
            s,
            "  boundary pair      ({}, {})",
            p.boundary_pair.p(),
            p.boundary_pair.q()
        );
        let _ = writeln!(s, "  lhs                {}", p.lhs);
        let _ = writeln!(s, "  printed rhs        {}  (2 beta (1-alpha) / (p q))", p.rhs);
        let _ = writeln!(s, "  consistent rhs     {}  (2 beta (1-alpha) * p q)", p.consistent_rhs);
        let _ = writeln!(
            s,
            "  printed verdict    {}",
            if p.printed_member { "member" } else { "not-member" }
        );
        let _ = writeln!(
            s,
            "  thresholds agree   {}",
            if p.rhs == p.consistent_rhs { "yes" } else { "no" }
        );
        let _ = writeln!(
            s,
            "  verdicts agree     {}",
            if p.agrees_with_sum_verdict { "yes" } else { "no" }
        );
        let _ = writeln!(s, "  the coefficient-sum verdict above is authoritative");
    }
    s
}

pub fn verify(f: &NormalizedFunction, grid: &DiskGrid, r: &ConsistencyReport) -> String {
    let mut s = check(f, &r.criterion);
    let _ = writeln!(
        s,
        "grid         {} radii x {} angles, r_max {}",
        grid.n_radii(),
        grid.n_angles(),
        grid.r_max()
    );
    let _ = writeln!(
        s,
        "sampled sup  {} at {} {:+}i",
        r.sup.sup_modulus, r.sup.argmax_point.re, r.sup.argmax_point.im
    );
    let _ = writeln!(s, "min |f|      {}", r.sup.min_abs_f);
    let _ = writeln!(s, "skipped      {}", r.sup.skipped_points);
    if let Some(probe) = &r.boundary_probe {
        let _ = writeln!(s, "probe sup    {} (r_max 0.999)", probe.sup_modulus);
    }
    let flag = match &r.flag {
        ConsistencyFlag::Consistent => "consistent".to_string(),
        ConsistencyFlag::ManualReview { reason } => format!("manual review: {reason}"),
        ConsistencyFlag::ReportOnly => "report only (inconclusive verdict)".to_string(),
    };
    let _ = writeln!(s, "consistency  {flag}");
    s
}

pub fn scan(rows: &[ScanRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<8} {:>10} {:>10} {:>22} {:>10}  verdict",
        "family", "mu", "nu", "sum", "threshold"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<8} {:>10.4} {:>10.4} {:>22.15} {:>10.4}  {}",
            r.family,
            r.mu,
            r.nu,
            r.sum_value,
            r.threshold,
            r.verdict_label()
        );
    }
    s
}

pub fn bisect(r: &ThresholdResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "line         {}", r.line_description);
    let _ = writeln!(s, "nu*          {}", r.nu_star);
    let _ = writeln!(s, "bracket      [{}, {}]", r.bracket.0, r.bracket.1);
    let _ = writeln!(s, "residual     {:e}", r.residual);
    let _ = writeln!(s, "iterations   {}", r.iterations);
    let _ = writeln!(s, "monotone     {}", if r.monotone_check { "yes" } else { "no" });
    if !r.monotone_check {
        for (a, b) in &r.sign_changes {
            let _ = writeln!(s, "sign change  [{a}, {b}]");
        }
    }
    s
}
