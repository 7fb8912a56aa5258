//! CSV import and export for point sets, edge lists, walk traces and
//! replication logs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::connection::ConnectionFunction;
use crate::error::{Error, Result};
use crate::graphgen::{LayeredGraph, TaggedEdge};
use crate::pointset::{Point, PointSet};
use crate::walks::{ReplicationRecord, WalkTrace};

fn data_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Data { path: path.to_path_buf(), msg: msg.into() }
}

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn open(path: &Path, header: &[&str]) -> Result<csv::Reader<File>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let got: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if got != header {
        return Err(data_err(path, format!("expected header {}, found {}", header.join(","), got.join(","))));
    }
    Ok(rdr)
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize, line: usize) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| data_err(path, format!("row {line}: bad value in column {}", i + 1)))
}

/// `id,x,y` with ids `0..n`.
pub fn write_points(path: &Path, points: &PointSet) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["id", "x", "y"])?;
    for (i, p) in points.points().iter().enumerate() {
        w.write_record([i.to_string(), p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an `id,x,y` file; ids must run `0..n` in order.
pub fn read_points(path: &Path, bbox: (f64, f64), label: &str) -> Result<PointSet> {
    let mut rdr = open(path, &["id", "x", "y"])?;
    let mut pts = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let id: usize = field(path, &rec, 0, line + 2)?;
        if id != pts.len() {
            return Err(data_err(path, format!("row {}: expected id {}, found {id}", line + 2, pts.len())));
        }
        pts.push(Point::new(field(path, &rec, 1, line + 2)?, field(path, &rec, 2, line + 2)?));
    }
    PointSet::new(pts, bbox, label).map_err(|e| data_err(path, e.to_string()))
}

/// `u,v,band` with `u < v`, sorted by `(u, v)`; bands are 1-based.
pub fn write_edges(path: &Path, lg: &LayeredGraph) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["u", "v", "band"])?;
    for e in lg.tagged_edges() {
        w.write_record([e.u.to_string(), e.v.to_string(), (e.band + 1).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an edge list and rebuilds the layered graph, rejecting self-loops,
/// duplicates, unknown bands and edges whose length does not fit their band.
pub fn read_edges(path: &Path, points: Arc<PointSet>, cf: ConnectionFunction, seed: u64) -> Result<LayeredGraph> {
    let mut rdr = open(path, &["u", "v", "band"])?;
    let mut edges = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let band: u16 = field(path, &rec, 2, line + 2)?;
        if band == 0 {
            return Err(data_err(path, format!("row {}: bands are numbered from 1", line + 2)));
        }
        edges.push(TaggedEdge { u: field(path, &rec, 0, line + 2)?, v: field(path, &rec, 1, line + 2)?, band: band - 1 });
    }
    LayeredGraph::from_tagged_edges(points, cf, seed, edges).map_err(|e| data_err(path, e.to_string()))
}

/// `step,vertex,x,y`.
pub fn write_trace(path: &Path, trace: &WalkTrace, points: &PointSet) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["step", "vertex", "x", "y"])?;
    for (step, &v) in trace.vertices.iter().enumerate() {
        let p = points.points()[v];
        w.write_record([step.to_string(), v.to_string(), p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `step,vertex,parent_id,x,y`: one row per replicant at the position where
/// it was created. The first row is the initial replicant with an empty
/// parent; the others use the step of the triggering visit.
pub fn write_replication(path: &Path, rec: &ReplicationRecord, points: &PointSet) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["step", "vertex", "parent_id", "x", "y"])?;
    let p = points.points()[rec.start];
    w.write_record(["0".to_string(), rec.start.to_string(), String::new(), p.x.to_string(), p.y.to_string()])?;
    for e in &rec.spawn_events {
        let p = points.points()[e.vertex];
        w.write_record([e.step.to_string(), e.vertex.to_string(), e.parent.to_string(), p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(text.as_bytes())?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::Preset;
    use crate::graphgen::generate;
    use crate::pointset::sample_uniform;

    #[test]
    fn points_roundtrip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.csv");
        let ps = sample_uniform(50, 8.0, 8.0, 3).unwrap();
        write_points(&path, &ps).unwrap();
        let back = read_points(&path, (8.0, 8.0), "uniform").unwrap();
        assert_eq!(back, ps);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("id,x,y\n0,"));
    }

    #[test]
    fn points_reject_gaps_and_bad_headers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        std::fs::write(&path, "id,x,y\n0,1,1\n2,1,1\n").unwrap();
        assert!(read_points(&path, (8.0, 8.0), "x").is_err());
        std::fs::write(&path, "i,x,y\n0,1,1\n").unwrap();
        assert!(read_points(&path, (8.0, 8.0), "x").is_err());
        std::fs::write(&path, "id,x,y\n0,9,1\n").unwrap();
        assert!(read_points(&path, (8.0, 8.0), "x").is_err());
    }

    #[test]
    fn edges_roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        let ps = Arc::new(sample_uniform(120, 8.0, 8.0, 5).unwrap());
        let cf = Preset::S.function();
        let lg = generate(Arc::clone(&ps), &cf, 8).unwrap();
        write_edges(&path, &lg).unwrap();
        let back = read_edges(&path, Arc::clone(&ps), cf.clone(), 8).unwrap();
        assert_eq!(back.tagged_edges(), lg.tagged_edges());

        std::fs::write(&path, "u,v,band\n0,0,1\n").unwrap();
        assert!(read_edges(&path, Arc::clone(&ps), cf.clone(), 8).is_err());
        std::fs::write(&path, "u,v,band\n0,1,9\n").unwrap();
        assert!(read_edges(&path, Arc::clone(&ps), cf.clone(), 8).is_err());
        std::fs::write(&path, "u,v,band\n0,1,0\n").unwrap();
        assert!(read_edges(&path, ps, cf, 8).is_err());
    }
}
