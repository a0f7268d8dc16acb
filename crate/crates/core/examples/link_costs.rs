//! Tabulates the link cost of every metric and merge function for a link
//! of given normalized length as its usage grows.
//!
//! ```bash
//! cargo run -p eonsim --example link_costs -- 0.5 1.0
//! ```

use eonsim::{CostSpec, Merge, Metric, SlotRange, SpectrumGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let length: f64 = args.next().map_or(Ok(0.5), |s| s.parse())?;
    let alpha: f64 = args.next().map_or(Ok(1.0), |s| s.parse())?;

    let mut specs = vec![CostSpec::new(Metric::LL), CostSpec::new(Metric::U)];
    for metric in [Metric::LLU, Metric::LLP] {
        for merge in Merge::ALL {
            specs.push(CostSpec::new(metric).with_merge(merge).with_alpha(alpha));
        }
    }

    // Fill a 180-slot link in 2-slot chunks separated by one free slot, so
    // the accommodation probability for a 3-slot demand collapses early.
    let needed = 3;
    print!("{:>6} {:>6}", "usage", "p(3)");
    for spec in &specs {
        print!(" {:>22}", spec.to_string());
    }
    println!();
    let mut grid = SpectrumGrid::new(180);
    let mut start = 0;
    for step in 0..=6 {
        let target = step * 20;
        while grid.used_slots() < target && start + 2 <= 180 {
            grid.allocate(SlotRange::new(start, 2))?;
            start += 3;
        }
        let (u, p) = (grid.usage(), grid.accommodation_probability(needed));
        print!("{u:>6.3} {p:>6.3}");
        for spec in &specs {
            print!(" {:>22.4}", spec.link_cost(length, u, p)?);
        }
        println!();
    }
    Ok(())
}
