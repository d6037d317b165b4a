mod args;
mod render;

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use num_complex::Complex64;

use lommel_core::scan::{scan_lommel_rect, to_csv_string};
use lommel_core::{
    check_membership, check_membership_with_printed, cross_validate, registry, scan_grid,
    series_eval, threshold_bisect, ClassId, ConvolutionKernel, DiskGrid, FamilyLine,
    NormalizedFunction, OrderTypeParams, Range,
};

use args::{
    BisectArgs, CheckArgs, ClassArgs, Cli, Command, EvalArgs, FamilyArg, Format, FunctionArgs,
    KernelArg, OutputArgs, ScanArgs, VerifyArgs,
};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(a) => eval(a),
        Command::Check(a) => check(a),
        Command::Verify(a) => verify(a),
        Command::Scan(a) => scan(a),
        Command::Bisect(a) => bisect(a),
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => {
            let mut f = File::create(path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            f.write_all(text.as_bytes())?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn class_params(c: &ClassArgs) -> Result<(ClassId, OrderTypeParams)> {
    let class = registry::builtin().get(&c.class)?.class();
    Ok((class, OrderTypeParams::new(c.alpha, c.beta)?))
}

fn build_function(a: &FunctionArgs, class: Option<ClassId>) -> Result<NormalizedFunction> {
    let base = match a.family {
        FamilyArg::Bessel => NormalizedFunction::bessel(a.nu)?,
        FamilyArg::Struve => NormalizedFunction::struve(a.nu)?,
        FamilyArg::Lommel => {
            let mu = a.mu.ok_or_else(|| anyhow!("--family lommel requires --mu"))?;
            NormalizedFunction::lommel(mu, a.nu)?
        }
    };
    if a.mu.is_some() && a.family != FamilyArg::Lommel {
        bail!("--mu only applies to --family lommel");
    }
    let kernel = match a.kernel {
        KernelArg::Auto => class.map_or(ConvolutionKernel::None, |c| c.required_kernel()),
        KernelArg::SType => ConvolutionKernel::Alternating,
        KernelArg::TType => ConvolutionKernel::NegativeTail,
    };
    Ok(base.with_kernel(kernel))
}

fn parse_point(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().with_context(|| format!("bad coordinate `{t}`"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => bail!("--z expects `re` or `re,im`, got `{s}`"),
    }
}

fn line(family: FamilyArg, offset: Option<f64>) -> Result<FamilyLine> {
    match (family, offset) {
        (FamilyArg::Bessel, None) => Ok(FamilyLine::Bessel),
        (FamilyArg::Struve, None) => Ok(FamilyLine::Struve),
        (FamilyArg::Lommel, Some(offset)) => Ok(FamilyLine::Lommel { offset }),
        (FamilyArg::Lommel, None) => bail!("--family lommel needs --offset (mu - nu)"),
        (_, Some(_)) => bail!("--offset only applies to --family lommel"),
    }
}

fn no_csv(out: &OutputArgs, what: &str) -> Result<()> {
    if out.format == Format::Csv {
        bail!("csv output is only available for scan, not {what}");
    }
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    no_csv(&a.output, "eval")?;
    let f = build_function(&a.function, None)?;
    let z = parse_point(&a.z)?;
    let result = series_eval(&f, z, a.order, a.output.tol)?;
    let text = match a.output.format {
        Format::Json => json(&serde_json::json!({
            "function": f,
            "z": z,
            "order": a.order,
            "result": result,
        }))?,
        _ => render::eval(&f, z, a.order, &result),
    };
    emit(&a.output, &text)
}

fn check(a: CheckArgs) -> Result<()> {
    no_csv(&a.output, "check")?;
    let (class, params) = class_params(&a.class)?;
    let f = build_function(&a.function, Some(class))?;
    let report = if a.compare_paper_rhs {
        check_membership_with_printed(&f, class, params, a.output.tol)?
    } else {
        check_membership(&f, class, params, a.output.tol)?
    };
    let text = match a.output.format {
        Format::Json => json(&serde_json::json!({ "function": f, "report": report }))?,
        _ => render::check(&f, &report),
    };
    emit(&a.output, &text)
}

fn verify(a: VerifyArgs) -> Result<()> {
    no_csv(&a.output, "verify")?;
    let (class, params) = class_params(&a.class)?;
    let f = build_function(&a.function, Some(class))?;
    let grid = DiskGrid::new(a.radii, a.angles, a.r_max)?;
    let report = cross_validate(&f, class, params, &grid, a.output.tol)?;
    let text = match a.output.format {
        Format::Json => json(&serde_json::json!({ "function": f, "grid": grid, "report": report }))?,
        _ => render::verify(&f, &grid, &report),
    };
    emit(&a.output, &text)
}

fn scan(a: ScanArgs) -> Result<()> {
    let (class, params) = class_params(&a.class)?;
    let nus: Range = a.nu.parse()?;
    let rows = match (&a.mu, a.family) {
        (Some(mus), FamilyArg::Lommel) => {
            scan_lommel_rect(&mus.parse()?, &nus, class, params, a.output.tol)
        }
        (Some(_), _) => bail!("--mu ranges only apply to --family lommel"),
        (None, family) => scan_grid(line(family, a.offset)?, &nus, class, params, a.output.tol),
    };
    let text = match a.output.format {
        Format::Csv => to_csv_string(&rows),
        Format::Json => json(&rows)?,
        Format::Human => render::scan(&rows),
    };
    emit(&a.output, &text)
}

fn bisect(a: BisectArgs) -> Result<()> {
    no_csv(&a.output, "bisect")?;
    let (class, params) = class_params(&a.class)?;
    let bounds: Vec<f64> = a
        .bracket
        .split(':')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad bracket `{}`", a.bracket))?;
    let [lo, hi] = bounds[..] else {
        bail!("--bracket expects lo:hi, got `{}`", a.bracket);
    };
    let line = line(a.family, a.offset)?;
    let result = threshold_bisect(line, class, params, (lo, hi), a.abs_tol, a.output.tol)?;
    let text = match a.output.format {
        Format::Json => json(&result)?,
        _ => render::bisect(&result),
    };
    emit(&a.output, &text)
}
