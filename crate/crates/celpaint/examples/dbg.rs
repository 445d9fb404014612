use celpaint::raster::*;
use celpaint::rules::*;
use celpaint::synthbench::*;

fn main() {
    // Creature: find the mixed component.
    let spec = CreatureSpec::default();
    let g = gen_creature(&spec).unwrap();
    let mask = binarize(&g.art, DEFAULT_BINARIZE_THRESHOLD);
    let map = label_components(&mask, Connectivity::Four);
    println!("creature components: {}", map.components().len());
    for c in map.components() {
        // truth labels present in this component
        let mut labels = std::collections::BTreeSet::new();
        for y in 0..g.art.height() {
            for x in 0..g.art.width() {
                if map.label(x, y) == c.id {
                    labels.insert(format!("{:?}", g.truth.label(x, y)));
                }
            }
        }
        println!("  comp {} area {} bbox {:?} labels {:?}", c.id, c.area, c.bbox, labels);
    }
    g.art.save_png("/tmp/creature.png").unwrap();

    // Flower gap item: count components.
    let corpus = gen_corpus(24, 0.0, 17).unwrap();
    for item in corpus.items.iter().take(8) {
        let mask = binarize(&item.art, DEFAULT_BINARIZE_THRESHOLD);
        let map = label_components(&mask, Connectivity::Four);
        println!("{} family {:?} comps {}", item.id, item.family, map.components().len());
        item.art.save_png(format!("/tmp/{}.png", item.id)).unwrap();
    }
}
