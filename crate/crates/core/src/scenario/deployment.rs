//! Site, cell and beam layout.

use crate::geometry::{Point2, Point3, Region};
use crate::radio::antenna::TxBeamPattern;
use crate::scenario::ScenarioConfig;

pub const CELLS_PER_SITE: usize = 3;
pub const BEAMS_PER_CELL: usize = 12;
pub const SECTOR_BORESIGHTS_DEG: [f64; CELLS_PER_SITE] = [0.0, 120.0, 240.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamTier {
    /// Beams 1..=8: 16x8 panel, horizon-pointing, narrow.
    Far,
    /// Beams 9..=12: 8x4 panel, down-tilted, wide.
    Near,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beam {
    /// 1-based beam number within its cell.
    pub number: usize,
    pub tier: BeamTier,
    pub pattern: TxBeamPattern,
}

impl Beam {
    pub fn for_number(number: usize, element_gain_dbi: f64, sidelobe_floor_db: f64) -> Beam {
        assert!(
            (1..=BEAMS_PER_CELL).contains(&number),
            "beam number {number} out of range"
        );
        let b = number as f64;
        let (tier, elevation, azimuth, rows, cols) = if number <= 8 {
            (BeamTier::Far, 90.0, -52.5 + 15.0 * (b - 1.0), 16, 8)
        } else {
            (BeamTier::Near, 97.0, -45.0 + 30.0 * (b - 9.0), 8, 4)
        };
        Beam {
            number,
            tier,
            pattern: TxBeamPattern::new(
                elevation,
                azimuth,
                rows,
                cols,
                element_gain_dbi,
                sidelobe_floor_db,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub site: usize,
    pub boresight_deg: f64,
    pub beams: Vec<Beam>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub sites: Vec<Point2>,
    pub bs_height_m: f64,
    pub cells: Vec<Cell>,
    pub region: Region,
}

impl Deployment {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_beams_total(&self) -> usize {
        self.cells.iter().map(|c| c.beams.len()).sum()
    }

    pub fn site_position(&self, site: usize) -> Point3 {
        let p = self.sites[site];
        Point3::new(p.x, p.y, self.bs_height_m)
    }
}

/// Build the hexagonal layout: a centre site plus a ring of six at one
/// inter-site distance, three sectors per site.
pub fn build_deployment(config: &ScenarioConfig) -> Deployment {
    let isd = config.inter_site_distance_m;
    let mut sites = vec![Point2::new(0.0, 0.0)];
    if config.n_sites == 7 {
        for k in 0..6 {
            let a = (30.0 + 60.0 * k as f64).to_radians();
            sites.push(Point2::new(isd * a.cos(), isd * a.sin()));
        }
    }
    let beams: Vec<Beam> = (1..=BEAMS_PER_CELL)
        .map(|b| Beam::for_number(b, config.element_gain_dbi, config.sidelobe_floor_db))
        .collect();
    let mut cells = Vec::with_capacity(sites.len() * CELLS_PER_SITE);
    for site in 0..sites.len() {
        for boresight in SECTOR_BORESIGHTS_DEG {
            cells.push(Cell {
                id: cells.len(),
                site,
                boresight_deg: boresight,
                beams: beams.clone(),
            });
        }
    }
    // Ring sites sit on the vertices of a hexagon of circumradius ISD; the
    // region adds half an ISD of margin around them.
    let circumradius = if config.n_sites == 7 {
        1.5 * isd
    } else {
        0.75 * isd
    };
    Deployment {
        sites,
        bs_height_m: config.bs_height_m,
        cells,
        region: Region { circumradius },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_layout_counts() {
        let d = build_deployment(&ScenarioConfig::default());
        assert_eq!(d.sites.len(), 7);
        assert_eq!(d.n_cells(), 21);
        assert_eq!(d.n_beams_total(), 252);
        for site in 0..7 {
            let cells: Vec<_> = d.cells.iter().filter(|c| c.site == site).collect();
            assert_eq!(cells.len(), 3);
            let mut b: Vec<f64> = cells.iter().map(|c| c.boresight_deg).collect();
            b.sort_by(f64::total_cmp);
            assert_eq!(b, vec![0.0, 120.0, 240.0]);
        }
        for s in &d.sites[1..] {
            assert!((s.distance(d.sites[0]) - 200.0).abs() < 1e-9);
        }
    }

    #[test]
    fn beam_angles() {
        let d = build_deployment(&ScenarioConfig::default());
        let beams = &d.cells[0].beams;
        assert_eq!(beams.len(), 12);
        assert_eq!(beams[0].pattern.azimuth_deg, -52.5);
        assert_eq!(beams[0].pattern.elevation_deg, 90.0);
        assert_eq!(beams[7].pattern.azimuth_deg, 52.5);
        assert_eq!(beams[11].pattern.elevation_deg, 97.0);
        assert_eq!(beams[11].pattern.azimuth_deg, 45.0);
        assert_eq!(beams[8].pattern.azimuth_deg, -45.0);
        for (i, b) in beams.iter().enumerate() {
            let n = i + 1;
            assert_eq!(b.number, n);
            if n <= 8 {
                assert_eq!(b.tier, BeamTier::Far);
                assert_eq!((b.pattern.rows, b.pattern.cols), (16, 8));
                assert_eq!(b.pattern.azimuth_deg, -52.5 + 15.0 * (n as f64 - 1.0));
            } else {
                assert_eq!(b.tier, BeamTier::Near);
                assert_eq!((b.pattern.rows, b.pattern.cols), (8, 4));
                assert_eq!(b.pattern.azimuth_deg, -45.0 + 30.0 * (n as f64 - 9.0));
            }
        }
    }

    #[test]
    fn construction_is_pure() {
        let a = build_deployment(&ScenarioConfig::default());
        let b = build_deployment(&ScenarioConfig::default());
        assert_eq!(a, b);
    }

    #[test]
    fn sites_inside_region() {
        let d = build_deployment(&ScenarioConfig::default());
        for s in &d.sites {
            assert!(d.region.contains(*s));
        }
    }
}
