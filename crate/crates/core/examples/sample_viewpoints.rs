//! Samples a table and a handful of camera viewpoints, printing the shell
//! radii and each camera's position and lights.
//!
//!     cargo run --example sample_viewpoints -- [seed]

use tabletop_amodal::sampler::{
    light_radii, sample_table, sample_viewpoints, view_radii, RngStreams,
};
use tabletop_amodal::SceneConfig;

fn main() -> tabletop_amodal::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = SceneConfig {
        v_views: 5,
        master_seed: seed,
        ..SceneConfig::default()
    };
    let streams = RngStreams::new(cfg.master_seed);
    let table = sample_table(&cfg, &mut streams.scene(0))?;
    println!(
        "table {:.2} x {:.2} m at height {:.2} m",
        table.width, table.length, table.height
    );
    let (vl, vu) = view_radii(&table, &cfg);
    let (ll, lu) = light_radii(&table, &cfg);
    println!("camera shell [{vl:.3}, {vu:.3}] m, light shell [{ll:.3}, {lu:.3}] m");

    let views = sample_viewpoints(&table, &cfg, &mut streams.scene(0));
    for (i, v) in views.iter().enumerate() {
        let p = v.position;
        println!("view {i}: camera at ({:.3}, {:.3}, {:.3})", p.x, p.y, p.z);
        for l in &v.lights {
            println!(
                "    light {:.0} K, {:.0} lx at distance {:.3} m",
                l.temperature,
                l.intensity,
                (l.position - v.look_target).norm()
            );
        }
    }
    Ok(())
}
