//! Shows how fragmentation separates usage from accommodation probability,
//! and how first-fit finds a range that is free on every link of a path.
//!
//! ```bash
//! cargo run -p eonsim --example spectrum_fragmentation
//! ```

use eonsim::{first_fit, SlotRange, SpectrumGrid};

fn render(grid: &SpectrumGrid) -> String {
    grid.occupancy()
        .iter()
        .map(|&busy| if busy { '#' } else { '.' })
        .collect()
}

fn main() {
    // Two 24-slot links with the same usage but different fragmentation.
    let mut packed = SpectrumGrid::new(24);
    packed.allocate(SlotRange::new(0, 12)).unwrap();

    let mut scattered = SpectrumGrid::new(24);
    for start in (0..24).step_by(4) {
        scattered.allocate(SlotRange::new(start, 2)).unwrap();
    }

    for (name, grid) in [("packed", &packed), ("scattered", &scattered)] {
        println!("{name:<10} {}  usage {:.2}", render(grid), grid.usage());
        for needed in 1..=4 {
            println!(
                "{:<10} needs {needed}: usable {:>2} slots, p = {:.3}",
                "",
                grid.usable_slots(needed),
                grid.accommodation_probability(needed)
            );
        }
    }

    // A two-hop path: the range must be free on both links at the same indices.
    let mut a = SpectrumGrid::new(24);
    a.allocate(SlotRange::new(0, 3)).unwrap();
    let mut b = SpectrumGrid::new(24);
    b.allocate(SlotRange::new(4, 2)).unwrap();
    println!("\nlink a     {}", render(&a));
    println!("link b     {}", render(&b));
    for needed in [1, 2, 3] {
        match first_fit([&a, &b], needed) {
            Some(range) => println!("first fit for {needed} slots: {range}"),
            None => println!("first fit for {needed} slots: blocked"),
        }
    }
}
