//! Encodes a small mask in COCO uncompressed RLE and decodes it again.
//!
//!     cargo run --example rle_codec

use tabletop_amodal::dataset::{rle_decode, rle_encode};
use tabletop_amodal::BitMask;

fn main() -> tabletop_amodal::Result<()> {
    // A 6 x 4 mask with a 3 x 2 block.
    let mask = BitMask::from_fn(6, 4, |x, y| (2..5).contains(&x) && (1..3).contains(&y));
    for y in 0..mask.height() {
        let row: String = (0..mask.width())
            .map(|x| if mask.get(x, y) { '#' } else { '.' })
            .collect();
        println!("{row}");
    }

    let rle = rle_encode(&mask);
    println!("size {:?}, counts {:?}", rle.size, rle.counts);
    println!("{}", serde_json::to_string(&rle)?);

    let back = rle_decode(&rle)?;
    assert_eq!(back, mask);
    println!("round trip ok");
    Ok(())
}
