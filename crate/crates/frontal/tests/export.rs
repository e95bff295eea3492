use frontal::export::{frame_rows, mesh_triangles, mesh_vertices, write_frame_csv, write_frame_obj, write_obj_mesh, Grid};
use frontal::jet::BasePoint;
use frontal::{FrontalChart, NumericPolicy};

#[test]
fn mesh_winding_follows_the_chart_orientation() {
    for name in ["torus", "sphere", "f1"] {
        let c = FrontalChart::gallery(name, NumericPolicy::default()).unwrap();
        let grid = Grid::new(9, 11).unwrap();
        let verts = mesh_vertices(&c, grid).unwrap();
        let points = grid.points(&c.domain());
        for t in mesh_triangles(grid) {
            let [a, b, d] = t.map(|i| verts[i]);
            let face = (b - a).cross(&(d - a));
            let (u, v) = points[t[0]];
            let f = c.position(BasePoint::new(u, v), 1).unwrap();
            let n = f.partial(1, 0).unwrap().cross(&f.partial(0, 1).unwrap());
            if n.norm() < 1e-3 {
                continue;
            }
            assert!(face.dot(&n) > 0.0, "{name} at ({u}, {v})");
        }
    }
}

#[test]
fn obj_counts() {
    let c = FrontalChart::gallery("plane", NumericPolicy::default()).unwrap();
    let grid = Grid::new(3, 4).unwrap();
    let verts = mesh_vertices(&c, grid).unwrap();
    let mut out = Vec::new();
    write_obj_mesh("plane", &verts, grid, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next(), Some("o plane"));
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12);
}

#[test]
fn umbilic_rows_are_blank() {
    let c = FrontalChart::gallery("sphere", NumericPolicy::default()).unwrap();
    let rows = frame_rows(&c, Grid::new(2, 2).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.frame.is_none()));
    let mut csv = Vec::new();
    write_frame_csv(&rows, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with("nan,nan,nan,nan,nan,nan"));
    let mut obj = Vec::new();
    write_frame_obj(&c, &rows, 0.1, &mut obj).unwrap();
    assert_eq!(String::from_utf8(obj).unwrap().lines().count(), 1);
}

#[test]
fn frame_segments() {
    let c = FrontalChart::gallery("torus", NumericPolicy::default()).unwrap();
    let rows = frame_rows(&c, Grid::new(3, 3).unwrap()).unwrap();
    let mut obj = Vec::new();
    write_frame_obj(&c, &rows, 0.1, &mut obj).unwrap();
    let text = String::from_utf8(obj).unwrap();
    let framed = rows.iter().filter(|r| r.frame.is_some()).count();
    assert!(framed > 0);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 3 * framed);
    assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 2 * framed);
}
