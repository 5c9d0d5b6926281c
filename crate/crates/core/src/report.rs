//! CSV artifacts. Floats are written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use crate::analysis::{EnergyReport, EstimateSuite, ImageEntry};
use crate::fields::FieldSample;
use crate::flow::{FlowHistory, SeedSet};
use crate::geometry::{Evolution, PadRadii};
use crate::pipeline::{Check, RunOutput};
use crate::{Error, Result};

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(Error::Io)
}

/// `t,cavity,zx,zy,radius,padded_radius` on `grid`.
pub fn write_evolution<W: Write>(w: W, e: &Evolution, pads: &PadRadii, grid: &[f64]) -> Result<()> {
    let mut out = writer(w, &["t", "cavity", "zx", "zy", "radius", "padded_radius"])?;
    for &t in grid {
        for i in 0..e.len() {
            let z = e.center(i, t);
            out.write_record([
                fmt(t),
                i.to_string(),
                fmt(z.x),
                fmt(z.y),
                fmt(e.radius(i, t)),
                fmt(pads.padded_radius(e, i, t)),
            ])
            .map_err(csv_err)?;
        }
    }
    finish(out)
}

/// `t,particle,kind,ref_x,ref_y,x,y,f11,f12,f21,f22,det_residual` for every
/// particle at every checkpoint; `kind` is `cell`, `node`, `outer` or
/// `hole<i>`.
pub fn write_checkpoints<W: Write>(w: W, history: &FlowHistory, seeds: &SeedSet) -> Result<()> {
    let header = ["t", "particle", "kind", "ref_x", "ref_y", "x", "y", "f11", "f12", "f21", "f22", "det_residual"];
    let mut out = writer(w, &header)?;
    let cells = seeds.grid.cells.len();
    let kind = |k: usize| -> String {
        if k < cells {
            "cell".into()
        } else if k < seeds.boundary_start {
            "node".into()
        } else {
            match (k - seeds.boundary_start) / seeds.boundary_samples {
                0 => "outer".into(),
                c => format!("hole{}", c - 1),
            }
        }
    };
    for s in &history.states {
        for (k, p) in s.particles.iter().enumerate() {
            let f = &p.gradient;
            out.write_record([
                fmt(s.t),
                k.to_string(),
                kind(k),
                fmt(p.reference.x),
                fmt(p.reference.y),
                fmt(p.position.x),
                fmt(p.position.y),
                fmt(f[(0, 0)]),
                fmt(f[(0, 1)]),
                fmt(f[(1, 0)]),
                fmt(f[(1, 1)]),
                fmt((f.determinant() - 1.0).abs()),
            ])
            .map_err(csv_err)?;
        }
    }
    finish(out)
}

/// `eps,abs_log_eps,flow,radial,total,renormalized,slope,total_volume`.
pub fn write_energy<W: Write>(w: W, r: &EnergyReport) -> Result<()> {
    let header = ["eps", "abs_log_eps", "flow", "radial", "total", "renormalized", "slope", "total_volume"];
    let mut out = writer(w, &header)?;
    for row in &r.rows {
        out.write_record([
            fmt(row.eps),
            fmt(row.eps.ln().abs()),
            fmt(row.flow),
            fmt(row.radial),
            fmt(row.total),
            fmt(row.renormalized),
            fmt(r.slope),
            fmt(r.total_volume),
        ])
        .map_err(csv_err)?;
    }
    finish(out)
}

/// `cavity,eps,area,target,rel_error,winding,radial_std,cavity_radius`.
pub fn write_images<W: Write>(w: W, images: &[ImageEntry]) -> Result<()> {
    let header = ["cavity", "eps", "area", "target", "rel_error", "winding", "radial_std", "cavity_radius"];
    let mut out = writer(w, &header)?;
    for i in images {
        out.write_record([
            i.cavity.to_string(),
            fmt(i.eps),
            fmt(i.area),
            fmt(i.target),
            fmt(i.rel_area_error()),
            i.winding.to_string(),
            fmt(i.radial_std),
            fmt(i.cavity_radius),
        ])
        .map_err(csv_err)?;
    }
    finish(out)
}

/// `check,member,d,r0,n,budget,alpha,lhs,bound,constant`.
pub fn write_estimates<W: Write>(w: W, suite: &EstimateSuite) -> Result<()> {
    let header = ["check", "member", "d", "r0", "n", "budget", "alpha", "lhs", "bound", "constant"];
    let mut out = writer(w, &header)?;
    for r in &suite.rows {
        out.write_record([
            r.check.to_string(),
            r.member.clone(),
            fmt(r.d),
            fmt(r.r0),
            r.n.to_string(),
            fmt(r.budget),
            fmt(r.alpha),
            fmt(r.lhs),
            fmt(r.bound),
            fmt(r.constant),
        ])
        .map_err(csv_err)?;
    }
    finish(out)
}

/// `name,value,limit,pass`.
pub fn write_checks<W: Write>(w: W, checks: &[Check]) -> Result<()> {
    let mut out = writer(w, &["name", "value", "limit", "pass"])?;
    for c in checks {
        out.write_record([c.name.clone(), fmt(c.value), fmt(c.limit), c.pass.to_string()]).map_err(csv_err)?;
    }
    finish(out)
}

/// `x,y,vx,vy,div,jacobian_norm`.
pub fn write_field<W: Write>(w: W, samples: &[FieldSample]) -> Result<()> {
    let mut out = writer(w, &["x", "y", "vx", "vy", "div", "jacobian_norm"])?;
    for s in samples {
        out.write_record([fmt(s.x.x), fmt(s.x.y), fmt(s.v.x), fmt(s.v.y), fmt(s.div), fmt(s.jacobian_norm)])
            .map_err(csv_err)?;
    }
    finish(out)
}

fn create(dir: &Path, name: &str) -> Result<std::io::BufWriter<std::fs::File>> {
    Ok(std::io::BufWriter::new(std::fs::File::create(dir.join(name))?))
}

/// Writes `evolution.csv`, `checkpoints.csv`, `energy.csv`, `image.csv` and
/// `checks.csv` into `dir`, creating it if needed.
pub fn write_run(dir: &Path, run: &RunOutput, time_grid: usize) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let p = &run.prepared;
    let grid = p.evolution.uniform_grid(time_grid.max(2));
    write_evolution(create(dir, "evolution.csv")?, &p.evolution, &p.pads, &grid)?;
    write_checkpoints(create(dir, "checkpoints.csv")?, &run.history, &run.seeds)?;
    write_energy(create(dir, "energy.csv")?, &run.energy)?;
    write_images(create(dir, "image.csv")?, &run.images)?;
    write_checks(create(dir, "checks.csv")?, &run.checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn checks_round_trip() {
        let mut buf = Vec::new();
        write_checks(&mut buf, &[Check::at_most("a", 0.5, 1.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "name,value,limit,pass\na,5.0000000000000000e-1,1.0000000000000000e0,true\n");
    }
}
