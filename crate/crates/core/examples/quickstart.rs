use sparsegeom::ann::{AnnConfig, Backend};
use sparsegeom::bouquet::AnifIndex;
use sparsegeom::geometry::PointSet;

fn main() -> sparsegeom::Result<()> {
    let points = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let cfg = AnnConfig::new(0.25, Backend::Tree)?;
    let index = AnifIndex::build(&points, 2, cfg, sparsegeom::DEFAULT_STRUCTURE_BUDGET)?;
    let hit = index.query(&[0.5, 0.2])?;
    println!("{} via {:?}", hit.distance, hit.tau);
    Ok(())
}
