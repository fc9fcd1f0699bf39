//! Seeds for each polygon the rule tables can fold, at a few side lengths.

use foldmesh::seedlab::{compile_shape, predict_fold, Shape};

fn main() {
    let shapes = [Shape::Triangle, Shape::Square, Shape::Rectangle { long: 3, short: 1 }, Shape::Hexagon, Shape::Octagon];
    for shape in shapes {
        let name = format!("{shape:?}");
        for expansion in 1..=4 {
            match compile_shape(shape, expansion) {
                Ok(seed) => {
                    let plan = predict_fold(&seed).unwrap();
                    println!("{name:<34} x{expansion}  {seed:<40} corners {}", plan.corners());
                }
                Err(e) => println!("{name:<34} x{expansion}  {e}"),
            }
        }
    }
}
