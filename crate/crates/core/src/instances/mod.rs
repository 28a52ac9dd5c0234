//! Instance generation and file formats.

mod edge_list;
mod geojson;
mod unit_disc;

pub use edge_list::{parse_edge_list, write_edge_list};
pub use geojson::{geojson_to_graph, parse_geojson, Point, Region, RegionSet, Ring};
pub use unit_disc::{gen_unit_disc, gen_unit_disc_points, unit_disc_from_points, UnitDiscParams};
