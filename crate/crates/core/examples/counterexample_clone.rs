//! The clone of eventually-coordinate polymorphisms of (Q,<).
use clonebench::plmap::PLMap;
use clonebench::qclone::{compose_members, extend_restriction, make_member, noncontinuity_demo, uniqueness_witnesses, xi};
use clonebench::rational::{int, render};

fn main() -> clonebench::Result<()> {
    let f = make_member("f", 2, 1, int(0), PLMap::translation(int(1)), &[(vec![int(-1), int(-1)], int(-3))])?;
    let g = make_member("g", 1, 0, int(2), PLMap::affine(int(2), int(0)), &[])?;
    let c = compose_members(&f, &[g.clone(), g])?;
    println!("xi(f) = {}, xi(f(g,g)) = {}, threshold {}", xi(&f)? + 1, xi(&c)? + 1, render(c.threshold()));

    let demo = noncontinuity_demo(3, 4, 0)?;
    println!("restriction of {} points extends with coordinates {:?}, agreement {}", demo.restriction.len(),
        demo.coordinates.iter().map(|c| c + 1).collect::<Vec<_>>(), demo.agreement);

    let grid: Vec<_> = (-5..5).map(int).collect();
    let u = uniqueness_witnesses(&f, &grid)?;
    println!("uniqueness: range floor {}, grid {} points ok = {}", render(&u.range_floors[0]), u.grid_points, u.grid_ok);

    // min restricted to finitely many points is reproduced inside the clone
    let pts = [(-1, 2), (3, 4), (0, 0), (-2, -5), (1, -1)];
    let data: Vec<_> = pts.iter().map(|&(x, y)| (vec![int(x), int(y)], int(x.min(y)))).collect();
    let e = extend_restriction(&data, 0, 2)?;
    println!("min restriction reproduced: {}", data.iter().all(|(p, y)| e.eval(p) == *y));
    Ok(())
}
