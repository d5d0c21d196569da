//! Synthetic registries, paired corpora, and exact ground truth.
//!
//! The generator is the pipeline's brute-force oracle: alongside the data
//! it emits, per person and per channel, exactly which publications that
//! channel *can* find given the metadata it planted (an email on the
//! mention, a resolvable affiliation, a cluster label, a corpus-B
//! counterpart carrying an identifier). Tests can therefore assert exact
//! set equality instead of bounds.
//!
//! Construction guarantees worth knowing:
//!
//! - Registry name keys are either identical (deliberate homonyms) or at
//!   Levenshtein distance ≥ 2 per first initial, so the distance-1
//!   tolerance of name matching never crosses two distinct persons.
//! - Non-registry ("noise") co-author names are rejection-sampled to be
//!   incompatible with every registry person.
//! - Every rendered mention of a registry person folds back to exactly the
//!   person's canonical name key, whatever rendering variant was chosen.
//! - `first_page` is unique per corpus-A publication, so bibliographic
//!   match blocks are singletons: a record matches its counterpart and
//!   nothing else, and cross-corpus mapping is never ambiguous.
//! - Generation is single-threaded with one seeded RNG stream; identical
//!   configs produce byte-identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    read_jsonl_rows, write_jsonl, write_registry, Affiliation, AuthorMention, BiblioRecord,
    Corpus, CorpusTag, OrgAliasMap, Person, PersonId, PubId, Publication,
};
use crate::error::{Error, Result};
use crate::evaluator::GoldStandard;
use crate::expander::Method;
use crate::namekit::{levenshtein, normalize_name, NameKey};
use crate::seeder::Strategy;

/// Knobs of the synthetic world. Rates are probabilities in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub rng_seed: u64,
    pub n_persons: usize,
    pub n_pubs: usize,
    /// Fraction of persons sharing their exact name key with another
    /// person (built as clone pairs, so the realized fraction is the
    /// nearest even count).
    pub homonym_rate: f64,
    /// Chance that a registry author's mention carries their email.
    pub email_coverage: f64,
    /// Fraction of publications carrying author-affiliation links.
    pub linkage_coverage: f64,
    /// Chance that a registry organization has a resolved alias set.
    pub alias_coverage: f64,
    /// Fraction of corpus-A publications with a corpus-B counterpart.
    pub b_coverage: f64,
    /// Chance that a person's corpus-B mentions are split over two
    /// external identifiers instead of one.
    pub xid_split_rate: f64,
    pub cluster_count_meso: usize,
    pub clusters_per_meso: usize,
    /// Publication years, inclusive.
    pub year_range: (i32, i32),
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            rng_seed: 42,
            n_persons: 200,
            n_pubs: 5_000,
            homonym_rate: 0.05,
            email_coverage: 0.55,
            linkage_coverage: 0.69,
            alias_coverage: 0.92,
            b_coverage: 0.90,
            xid_split_rate: 0.15,
            cluster_count_meso: 24,
            clusters_per_meso: 6,
            year_range: (1999, 2012),
        }
    }
}

// Internal texture constants, deliberately not configurable.
const PARTICLE_RATE: f64 = 0.2;
const REPRINT_RATE: f64 = 0.7;
const LABEL_RATE: f64 = 0.95;
const ATTRIBUTED_RATE: f64 = 0.6;
const SECOND_AUTHOR_RATE: f64 = 0.35;
const ZIPF_EXPONENT: f64 = 1.07;

const GIVEN_NAMES: &[&str] = &[
    "Anna", "Albert", "Arend", "Bart", "Bente", "Cor", "Carla", "Daan", "Dirk", "Els", "Erik",
    "Femke", "Frank", "Geert", "Gerda", "Hans", "Hilde", "Iris", "Ivo", "Jan", "Joris", "Kees",
    "Karin", "Lars", "Lotte", "Mark", "Mieke", "Niels", "Nora", "Otto", "Paul", "Petra", "Rik",
    "Rosa", "Sander", "Sofie", "Teun", "Tessa", "Vera", "Wim",
];

const SURNAME_PREFIXES: &[&str] = &[
    "Bak", "Berg", "Boer", "Brug", "Dal", "Dijk", "Eik", "Gra", "Hout", "Kamp", "Lind", "Mol",
    "Nieu", "Pol", "Riet", "Slot", "Veld", "Vos", "Wal", "Zand",
];

const SURNAME_SUFFIXES: &[&str] = &[
    "ker", "man", "sma", "stra", "huis", "veen", "hof", "mans", "sen", "ers", "kens", "broek",
];

const PARTICLES: &[&str] = &["de", "van", "van der", "van den", "ter", "den"];

const CITIES: &[&str] = &[
    "Amsterdam", "Utrecht", "Leiden", "Groningen", "Delft", "Rotterdam", "Nijmegen", "Tilburg",
    "Eindhoven", "Maastricht", "Twente", "Wageningen", "Zwolle", "Arnhem", "Breda", "Haarlem",
    "Leeuwarden", "Middelburg", "Alkmaar", "Apeldoorn", "Enschede", "Amersfoort", "Dordrecht",
    "Gouda",
];

const JOURNALS: &[&str] = &[
    "Journal of Informetrics",
    "Scientometrics",
    "Research Evaluation",
    "Journal of Documentation",
    "Information Processing and Management",
    "Journal of Information Science",
    "Quantitative Science Studies",
    "Science and Public Policy",
    "Research Policy",
    "Annals of Library Science",
    "Journal of Scholarly Publishing",
    "Data Science Quarterly",
];

const TITLE_ADJECTIVES: &[&str] = &[
    "systematic", "comparative", "longitudinal", "empirical", "bibliometric", "structural",
    "quantitative", "exploratory", "robust", "scalable", "deterministic", "heterogeneous",
];

const TITLE_NOUNS: &[&str] = &[
    "analysis", "assessment", "survey", "study", "evaluation", "classification",
    "disambiguation", "reconstruction", "benchmark", "framework",
];

const TITLE_FIELDS: &[&str] = &[
    "citation networks", "author careers", "research portfolios", "publication archives",
    "collaboration graphs", "funding landscapes", "institutional repositories",
    "scholarly databases",
];

/// Per-person, per-channel sets of ground-truth publications that the
/// channel can reach given the planted metadata. Seed is the union of the
/// five strategies; cluster and identifier expansions assume the full
/// (unpruned) seed as the anchor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reachability {
    pub em: BTreeSet<PubId>,
    pub rp: BTreeSet<PubId>,
    pub dl: BTreeSet<PubId>,
    pub al: BTreeSet<PubId>,
    pub dai: BTreeSet<PubId>,
    pub seed: BTreeSet<PubId>,
    pub meso: BTreeSet<PubId>,
    pub micro: BTreeSet<PubId>,
    pub xid: BTreeSet<PubId>,
}

impl Reachability {
    pub fn for_strategy(&self, strategy: Strategy) -> &BTreeSet<PubId> {
        match strategy {
            Strategy::Em => &self.em,
            Strategy::Rp => &self.rp,
            Strategy::Dl => &self.dl,
            Strategy::Al => &self.al,
            Strategy::Dai => &self.dai,
        }
    }

    pub fn for_method(&self, method: Method) -> &BTreeSet<PubId> {
        match method {
            Method::Seed => &self.seed,
            Method::Meso => &self.meso,
            Method::Micro => &self.micro,
            Method::Xid => &self.xid,
        }
    }
}

/// Exact person → (publication, position) truth plus per-channel
/// reachability.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub truth: BTreeMap<PersonId, BTreeSet<(PubId, u32)>>,
    pub reachable: BTreeMap<PersonId, Reachability>,
}

#[derive(Serialize, Deserialize)]
struct TruthRow {
    person_id: PersonId,
    assignments: Vec<(PubId, u32)>,
}

#[derive(Serialize, Deserialize)]
struct ReachRow {
    person_id: PersonId,
    #[serde(flatten)]
    reachable: Reachability,
}

impl GroundTruth {
    pub fn persons_with_publications(&self) -> BTreeSet<PersonId> {
        self.truth
            .iter()
            .filter(|(_, pubs)| !pubs.is_empty())
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Ground-truth (person, pub) pairs, the generator-side analogue of an
    /// oeuvre's unique pairs.
    pub fn pairs(&self) -> BTreeSet<(PersonId, PubId)> {
        self.truth
            .iter()
            .flat_map(|(person, pubs)| {
                pubs.iter().map(move |(pub_id, _)| (person.clone(), pub_id.clone()))
            })
            .collect()
    }

    pub fn write(&self, truth_path: &Path, reach_path: &Path) -> Result<()> {
        write_jsonl(
            truth_path,
            self.truth.iter().map(|(person_id, assignments)| TruthRow {
                person_id: person_id.clone(),
                assignments: assignments.iter().cloned().collect(),
            }),
        )?;
        write_jsonl(
            reach_path,
            self.reachable.iter().map(|(person_id, reachable)| ReachRow {
                person_id: person_id.clone(),
                reachable: reachable.clone(),
            }),
        )
    }

    pub fn load(truth_path: &Path, reach_path: &Path) -> Result<Self> {
        let mut out = GroundTruth::default();
        for (_, row) in read_jsonl_rows::<TruthRow>(truth_path)? {
            out.truth
                .insert(row.person_id, row.assignments.into_iter().collect());
        }
        for (_, row) in read_jsonl_rows::<ReachRow>(reach_path)? {
            out.reachable.insert(row.person_id, row.reachable);
        }
        Ok(out)
    }
}

/// Everything one generator run produces.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub registry: Vec<Person>,
    pub corpus_a: Corpus,
    pub corpus_b: Corpus,
    pub aliases: OrgAliasMap,
    pub gold: GoldStandard,
    pub ground_truth: GroundTruth,
}

impl SynthOutput {
    /// Writes the corpus-module file formats plus ground truth and
    /// reachability into `dir`.
    pub fn write_all(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_registry(&dir.join("persons.jsonl"), &self.registry)?;
        self.corpus_a.write(&dir.join("corpus_a.jsonl"))?;
        self.corpus_b.write(&dir.join("corpus_b.jsonl"))?;
        self.aliases.write(&dir.join("aliases.jsonl"))?;
        self.gold.write(&dir.join("gold.jsonl"))?;
        self.ground_truth.write(
            &dir.join("ground_truth.jsonl"),
            &dir.join("reachability.jsonl"),
        )
    }
}

fn validate_config(config: &SynthConfig) -> Result<()> {
    let rates = [
        ("homonym_rate", config.homonym_rate),
        ("email_coverage", config.email_coverage),
        ("linkage_coverage", config.linkage_coverage),
        ("alias_coverage", config.alias_coverage),
        ("b_coverage", config.b_coverage),
        ("xid_split_rate", config.xid_split_rate),
    ];
    for (name, rate) in rates {
        if !(0.0..=1.0).contains(&rate) || !rate.is_finite() {
            return Err(Error::InfeasibleConfig(format!(
                "{name} = {rate} is outside [0, 1]"
            )));
        }
    }
    if config.n_persons == 0 || config.n_pubs == 0 {
        return Err(Error::InfeasibleConfig(
            "n_persons and n_pubs must be positive".to_string(),
        ));
    }
    if config.homonym_rate > 0.0 && config.n_persons < 2 {
        return Err(Error::InfeasibleConfig(
            "homonyms require at least two persons".to_string(),
        ));
    }
    if config.cluster_count_meso == 0 || config.clusters_per_meso == 0 {
        return Err(Error::InfeasibleConfig(
            "cluster counts must be positive".to_string(),
        ));
    }
    if config.year_range.0 > config.year_range.1
        || config.year_range.0 < 1900
        || config.year_range.1 > 2100
    {
        return Err(Error::InfeasibleConfig(format!(
            "year_range {:?} must be well-ordered within [1900, 2100]",
            config.year_range
        )));
    }
    Ok(())
}

/// A registry person's name, kept in parts so every rendering variant can
/// be built without re-parsing.
#[derive(Debug, Clone)]
struct PersonName {
    given: String,
    particle: Option<String>,
    surname: String,
}

impl PersonName {
    fn family_name(&self) -> String {
        match &self.particle {
            Some(p) => format!("{p} {}", self.surname),
            None => self.surname.clone(),
        }
    }

    fn initial(&self) -> char {
        self.given.chars().next().unwrap().to_ascii_uppercase()
    }

    fn key(&self) -> NameKey {
        normalize_name(&format!("{}. {}", self.initial(), self.family_name()))
            .expect("generated names contain letters")
    }

    /// One of four fold-equivalent renderings, chosen by the RNG.
    fn render(&self, rng: &mut ChaCha8Rng) -> String {
        let family = self.family_name();
        match rng.random_range(0..4u8) {
            0 => format!("{}. {family}", self.initial()),
            1 => format!("{family}, {}.", self.initial()),
            2 => format!("{} {family}", self.given),
            _ => match &self.particle {
                // Dutch index style: particle trails the initials.
                Some(p) => format!("{}, {}. {p}", self.surname, self.initial()),
                None => format!("{family}, {}.", self.initial()),
            },
        }
    }
}

struct NamePools {
    surnames: Vec<String>,
    zipf: Zipf<f64>,
}

impl NamePools {
    fn new() -> Self {
        let mut surnames = Vec::new();
        for prefix in SURNAME_PREFIXES {
            for suffix in SURNAME_SUFFIXES {
                surnames.push(format!("{prefix}{suffix}"));
            }
        }
        let zipf = Zipf::new(surnames.len() as f64, ZIPF_EXPONENT)
            .expect("static Zipf parameters are valid");
        NamePools { surnames, zipf }
    }

    fn sample_name(&self, rng: &mut ChaCha8Rng) -> PersonName {
        let idx = (self.zipf.sample(rng) as usize).clamp(1, self.surnames.len()) - 1;
        let particle = rng
            .random_bool(PARTICLE_RATE)
            .then(|| PARTICLES[rng.random_range(0..PARTICLES.len())].to_string());
        let given = GIVEN_NAMES[rng.random_range(0..GIVEN_NAMES.len())].to_string();
        PersonName {
            given,
            particle,
            surname: self.surnames[idx].clone(),
        }
    }
}

/// Registry keys must be identical (homonyms) or ≥ 2 edits apart per
/// initial: distance 1 would let the matcher's tolerance bridge two
/// distinct persons and poison every exactness guarantee downstream.
fn separated(candidate: &NameKey, accepted: &BTreeMap<char, Vec<String>>) -> bool {
    accepted
        .get(&candidate.first_initial)
        .map(|lasts| {
            lasts
                .iter()
                .all(|last| levenshtein(last, &candidate.last_name) >= 2)
        })
        .unwrap_or(true)
}

/// Noise names may never be compatible with any registry person.
fn clear_of_registry(candidate: &NameKey, registry_keys: &BTreeMap<char, Vec<String>>) -> bool {
    registry_keys
        .get(&candidate.first_initial)
        .map(|lasts| {
            lasts
                .iter()
                .all(|last| levenshtein(last, &candidate.last_name) >= 2)
        })
        .unwrap_or(true)
}

struct DraftAuthor {
    /// Registry index, or None for a noise co-author.
    person: Option<usize>,
    rendered: String,
    email: Option<String>,
    /// Index into the draft publication's org list.
    org_slot: usize,
}

struct DraftPub {
    biblio: BiblioRecord,
    /// Authors in byline order; position = index + 1.
    authors: Vec<DraftAuthor>,
    /// Organization display names in slot order.
    orgs: Vec<String>,
    has_links: bool,
    /// Byline index of the corresponding author, if any.
    reprint_author: Option<usize>,
    meso: Option<String>,
    micro: Option<String>,
    in_b: bool,
}

/// Generates the whole synthetic world. Deterministic for a fixed config.
pub fn generate(config: &SynthConfig) -> Result<SynthOutput> {
    validate_config(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let pools = NamePools::new();

    // --- organizations -------------------------------------------------
    let n_orgs = (config.n_persons.div_ceil(8)).max(3);
    let mut org_variants: Vec<[String; 3]> = Vec::with_capacity(n_orgs);
    let mut org_resolved: Vec<bool> = Vec::with_capacity(n_orgs);
    for j in 0..n_orgs {
        let city = CITIES[j % CITIES.len()];
        let campus = j / CITIES.len();
        let base = if campus == 0 {
            city.to_string()
        } else {
            format!("{city} {campus}")
        };
        org_variants.push([
            format!("{base} University"),
            format!("University of {base}"),
            format!("Univ {base}"),
        ]);
        org_resolved.push(rng.random_bool(config.alias_coverage));
    }
    let mut aliases = OrgAliasMap::new();
    for (j, variants) in org_variants.iter().enumerate() {
        let keys: Vec<String> = if org_resolved[j] {
            variants.to_vec()
        } else {
            Vec::new()
        };
        aliases.insert(format!("org{j:03}"), keys);
    }

    // --- persons --------------------------------------------------------
    let clone_count = ((config.homonym_rate * config.n_persons as f64) / 2.0).round() as usize;
    let clone_count = clone_count.min(config.n_persons / 2);
    let base_count = config.n_persons - clone_count;
    if config.homonym_rate > 0.0 && (clone_count == 0 || base_count == 0) {
        return Err(Error::InfeasibleConfig(format!(
            "homonym_rate {} with {} persons yields no usable clone pairs",
            config.homonym_rate, config.n_persons
        )));
    }

    let mut names: Vec<PersonName> = Vec::with_capacity(config.n_persons);
    let mut accepted: BTreeMap<char, Vec<String>> = BTreeMap::new();
    for _ in 0..base_count {
        let mut tries = 0;
        let name = loop {
            let candidate = pools.sample_name(&mut rng);
            if separated(&candidate.key(), &accepted) {
                break candidate;
            }
            tries += 1;
            if tries > 2_000 {
                return Err(Error::InfeasibleConfig(format!(
                    "cannot place {} separated name keys; reduce n_persons",
                    config.n_persons
                )));
            }
        };
        let key = name.key();
        accepted.entry(key.first_initial).or_default().push(key.last_name);
        names.push(name);
    }

    // Clone targets are distinct base persons; each clone copies the base's
    // exact key but may use a different given name with the same initial.
    let mut clone_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut base_order: Vec<usize> = (0..base_count).collect();
    base_order.shuffle(&mut rng);
    for (c, &base_idx) in base_order.iter().take(clone_count).enumerate() {
        let base = &names[base_idx];
        let initial = base.initial().to_ascii_lowercase();
        let same_initial: Vec<&&str> = GIVEN_NAMES
            .iter()
            .filter(|g| g.chars().next().unwrap().to_ascii_lowercase() == initial)
            .collect();
        let given = same_initial[rng.random_range(0..same_initial.len())].to_string();
        names.push(PersonName {
            given,
            particle: base.particle.clone(),
            surname: base.surname.clone(),
        });
        clone_of.insert(base_count + c, base_idx);
    }

    let mut person_org: Vec<usize> = Vec::with_capacity(config.n_persons);
    let mut home_meso: Vec<usize> = Vec::with_capacity(config.n_persons);
    let mut home_micro: Vec<usize> = Vec::with_capacity(config.n_persons);
    let mut split_id: Vec<bool> = Vec::with_capacity(config.n_persons);
    for i in 0..config.n_persons {
        let org = match clone_of.get(&i) {
            // Homonym clones sit at a different organization than their
            // base but share its home cluster, which is what makes them a
            // realistic precision threat for cluster expansion.
            Some(&base_idx) if n_orgs > 1 => {
                let mut org = rng.random_range(0..n_orgs);
                while org == person_org[base_idx] {
                    org = rng.random_range(0..n_orgs);
                }
                org
            }
            Some(&base_idx) => person_org[base_idx],
            None => rng.random_range(0..n_orgs),
        };
        person_org.push(org);
        match clone_of.get(&i) {
            Some(&base_idx) => {
                home_meso.push(home_meso[base_idx]);
                home_micro.push(home_micro[base_idx]);
            }
            None => {
                home_meso.push(rng.random_range(0..config.cluster_count_meso));
                home_micro.push(rng.random_range(0..config.clusters_per_meso));
            }
        }
        split_id.push(rng.random_bool(config.xid_split_rate));
    }

    let person_id = |i: usize| PersonId(format!("p{i:04}"));
    let email_of = |i: usize| format!("person{i:04}@org{:03}.example", person_org[i]);
    let primary_xid = |i: usize| format!("x{i:04}");
    let second_xid = |i: usize| format!("x{i:04}s");

    // --- publications (corpus A drafts) ---------------------------------
    let registry_keys = {
        let mut keys: BTreeMap<char, Vec<String>> = BTreeMap::new();
        for name in &names {
            let key = name.key();
            keys.entry(key.first_initial).or_default().push(key.last_name);
        }
        keys
    };
    let mut noise_serial = 0usize;
    let mut drafts: Vec<DraftPub> = Vec::with_capacity(config.n_pubs);
    for i in 0..config.n_pubs {
        let year = rng.random_range(config.year_range.0..=config.year_range.1);
        let journal = JOURNALS[rng.random_range(0..JOURNALS.len())].to_string();
        let title = format!(
            "a {} {} of {} {} in {}, part {}",
            TITLE_ADJECTIVES[rng.random_range(0..TITLE_ADJECTIVES.len())],
            TITLE_NOUNS[rng.random_range(0..TITLE_NOUNS.len())],
            TITLE_ADJECTIVES[rng.random_range(0..TITLE_ADJECTIVES.len())],
            TITLE_FIELDS[rng.random_range(0..TITLE_FIELDS.len())],
            TITLE_FIELDS[rng.random_range(0..TITLE_FIELDS.len())],
            i + 1
        );
        let biblio = BiblioRecord {
            journal,
            year,
            title,
            first_page: format!("{}", 3 + i * 4),
        };

        let two_registry = rng.random_bool(SECOND_AUTHOR_RATE) && config.n_persons >= 2;
        let first = rng.random_range(0..config.n_persons);
        let mut registry_authors = vec![first];
        if two_registry {
            let mut second = rng.random_range(0..config.n_persons);
            while second == first {
                second = rng.random_range(0..config.n_persons);
            }
            registry_authors.push(second);
        }
        let noise_count = match rng.random_range(0..100u8) {
            0..30 => 0,
            30..75 => 1,
            _ => 2,
        };

        // Author slots: registry authors first, then noise, then shuffled.
        #[derive(Clone)]
        enum Slot {
            Registry(usize),
            Noise,
        }
        let mut slots: Vec<Slot> = registry_authors.iter().map(|&p| Slot::Registry(p)).collect();
        slots.extend(std::iter::repeat_n(Slot::Noise, noise_count));
        slots.shuffle(&mut rng);

        let mut orgs: Vec<String> = Vec::new();
        let mut org_display_of_registry_org: BTreeMap<usize, usize> = BTreeMap::new();
        let mut authors: Vec<DraftAuthor> = Vec::new();
        for slot in &slots {
            match slot {
                Slot::Registry(p) => {
                    let org = person_org[*p];
                    let org_slot = *org_display_of_registry_org.entry(org).or_insert_with(|| {
                        let display =
                            org_variants[org][rng.random_range(0..3usize)].clone();
                        orgs.push(display);
                        orgs.len() - 1
                    });
                    let email = rng
                        .random_bool(config.email_coverage)
                        .then(|| email_of(*p));
                    let rendered = names[*p].render(&mut rng);
                    debug_assert_eq!(
                        normalize_name(&rendered).ok().as_ref(),
                        Some(&names[*p].key())
                    );
                    authors.push(DraftAuthor {
                        person: Some(*p),
                        rendered,
                        email,
                        org_slot,
                    });
                }
                Slot::Noise => {
                    let name = loop {
                        let candidate = pools.sample_name(&mut rng);
                        if clear_of_registry(&candidate.key(), &registry_keys) {
                            break candidate;
                        }
                        noise_serial += 1;
                    };
                    noise_serial += 1;
                    orgs.push(format!("Research Institute {}", 1 + noise_serial % 37));
                    authors.push(DraftAuthor {
                        person: None,
                        rendered: name.render(&mut rng),
                        email: None,
                        org_slot: orgs.len() - 1,
                    });
                }
            }
        }

        let has_links = rng.random_bool(config.linkage_coverage);
        let reprint_author = rng
            .random_bool(REPRINT_RATE)
            .then(|| rng.random_range(0..authors.len()));
        let labeled = rng.random_bool(LABEL_RATE);
        let (meso, micro) = if labeled {
            let lead = authors
                .iter()
                .find_map(|a| a.person)
                .unwrap_or(first);
            let meso = home_meso[lead];
            let micro = home_micro[lead];
            (
                Some(format!("M{meso:03}")),
                Some(format!("M{meso:03}.m{micro:02}")),
            )
        } else {
            (None, None)
        };
        let in_b = rng.random_bool(config.b_coverage);
        drafts.push(DraftPub {
            biblio,
            authors,
            orgs,
            has_links,
            reprint_author,
            meso,
            micro,
            in_b,
        });
    }

    // --- truth ----------------------------------------------------------
    let a_pub_id = |i: usize| PubId(format!("A{i:06}"));
    let mut truth: BTreeMap<PersonId, BTreeSet<(PubId, u32)>> = BTreeMap::new();
    for i in 0..config.n_persons {
        truth.insert(person_id(i), BTreeSet::new());
    }
    // person index -> list of (draft index, position)
    let mut truth_idx: Vec<Vec<(usize, u32)>> = vec![Vec::new(); config.n_persons];
    for (i, draft) in drafts.iter().enumerate() {
        for (slot, author) in draft.authors.iter().enumerate() {
            if let Some(p) = author.person {
                let position = (slot + 1) as u32;
                truth
                    .get_mut(&person_id(p))
                    .unwrap()
                    .insert((a_pub_id(i), position));
                truth_idx[p].push((i, position));
            }
        }
    }

    // --- attributed records (DAI analogue) ------------------------------
    let mut attributed: Vec<Vec<usize>> = vec![Vec::new(); config.n_persons];
    for (p, pubs) in truth_idx.iter().enumerate() {
        for (draft_idx, _) in pubs {
            if rng.random_bool(ATTRIBUTED_RATE) {
                attributed[p].push(*draft_idx);
            }
        }
    }

    // --- corpus B -------------------------------------------------------
    // chosen_b_id[(person, draft)] = external id carried by that person's
    // mention on the B counterpart.
    let mut chosen_b_id: BTreeMap<(usize, usize), String> = BTreeMap::new();
    let mut b_pubs: Vec<Publication> = Vec::new();
    for (i, draft) in drafts.iter().enumerate() {
        if !draft.in_b {
            continue;
        }
        let mut authors = Vec::new();
        for (slot, author) in draft.authors.iter().enumerate() {
            let (rendered, xid) = match author.person {
                Some(p) => {
                    let id = if split_id[p] && rng.random_bool(0.5) {
                        second_xid(p)
                    } else {
                        primary_xid(p)
                    };
                    chosen_b_id.insert((p, i), id.clone());
                    (names[p].render(&mut rng), Some(id))
                }
                None => (
                    author.rendered.clone(),
                    Some(format!("n{i:06}.{slot}")),
                ),
            };
            authors.push(AuthorMention {
                position: (slot + 1) as u32,
                raw_name: rendered,
                email: None,
                external_author_id: xid,
            });
        }
        b_pubs.push(Publication {
            pub_id: PubId(format!("B{:06}", b_pubs.len())),
            source: CorpusTag::B,
            biblio: draft.biblio.clone(),
            authors,
            affiliations: Vec::new(),
            author_affil_links: None,
            reprint: None,
            meso_cluster: None,
            micro_cluster: None,
        });
    }

    // --- corpus A materialization ---------------------------------------
    let mut a_pubs: Vec<Publication> = Vec::with_capacity(drafts.len());
    for (i, draft) in drafts.iter().enumerate() {
        let affiliations: Vec<Affiliation> = draft
            .orgs
            .iter()
            .enumerate()
            .map(|(slot, org_name)| Affiliation {
                affil_id: format!("f{slot}"),
                org_name: org_name.clone(),
            })
            .collect();
        let authors: Vec<AuthorMention> = draft
            .authors
            .iter()
            .enumerate()
            .map(|(slot, author)| AuthorMention {
                position: (slot + 1) as u32,
                raw_name: author.rendered.clone(),
                email: author.email.clone(),
                external_author_id: None,
            })
            .collect();
        let author_affil_links = draft.has_links.then(|| {
            draft
                .authors
                .iter()
                .enumerate()
                .map(|(slot, author)| ((slot + 1) as u32, format!("f{}", author.org_slot)))
                .collect::<Vec<_>>()
        });
        let reprint = draft
            .reprint_author
            .map(|slot| ((slot + 1) as u32, format!("f{}", draft.authors[slot].org_slot)));
        a_pubs.push(Publication {
            pub_id: a_pub_id(i),
            source: CorpusTag::A,
            biblio: draft.biblio.clone(),
            authors,
            affiliations,
            author_affil_links,
            reprint,
            meso_cluster: draft.meso.clone(),
            micro_cluster: draft.micro.clone(),
        });
    }

    // --- registry -------------------------------------------------------
    let registry: Vec<Person> = (0..config.n_persons)
        .map(|i| Person {
            person_id: person_id(i),
            family_name: names[i].family_name(),
            given_names: vec![names[i].given.clone()],
            emails: vec![email_of(i)],
            affiliation_ids: vec![format!("org{:03}", person_org[i])],
            attributed_records: attributed[i]
                .iter()
                .map(|&draft_idx| drafts[draft_idx].biblio.clone())
                .collect(),
        })
        .collect();

    // --- exact reachability ----------------------------------------------
    let mut reachable: BTreeMap<PersonId, Reachability> = BTreeMap::new();
    for p in 0..config.n_persons {
        let pid = person_id(p);
        let mut reach = Reachability::default();
        let resolved = org_resolved[person_org[p]];
        for &(draft_idx, position) in &truth_idx[p] {
            let draft = &drafts[draft_idx];
            let pub_id = a_pub_id(draft_idx);
            let author = &draft.authors[(position - 1) as usize];
            if author.email.is_some() {
                reach.em.insert(pub_id.clone());
            }
            if resolved {
                if draft.has_links {
                    reach.dl.insert(pub_id.clone());
                } else {
                    reach.al.insert(pub_id.clone());
                }
                if draft.reprint_author == Some((position - 1) as usize) {
                    reach.rp.insert(pub_id.clone());
                }
            }
        }
        for &draft_idx in &attributed[p] {
            reach.dai.insert(a_pub_id(draft_idx));
        }
        reach.seed = [&reach.em, &reach.rp, &reach.dl, &reach.al, &reach.dai]
            .into_iter()
            .flatten()
            .cloned()
            .collect();

        // Cluster reachability: a truth pub is reachable when it carries a
        // label shared with at least one seed pub of the same person.
        let draft_of = |pub_id: &PubId| -> usize {
            pub_id.0[1..].parse::<usize>().expect("generated pub id")
        };
        let seed_mesos: BTreeSet<&String> = reach
            .seed
            .iter()
            .filter_map(|q| drafts[draft_of(q)].meso.as_ref())
            .collect();
        let seed_micros: BTreeSet<&String> = reach
            .seed
            .iter()
            .filter_map(|q| drafts[draft_of(q)].micro.as_ref())
            .collect();
        let harvested: BTreeSet<&String> = reach
            .seed
            .iter()
            .filter_map(|q| chosen_b_id.get(&(p, draft_of(q))))
            .collect();
        reach.meso = reach.seed.clone();
        reach.micro = reach.seed.clone();
        reach.xid = reach.seed.clone();
        for &(draft_idx, _) in &truth_idx[p] {
            let draft = &drafts[draft_idx];
            let pub_id = a_pub_id(draft_idx);
            if draft.meso.as_ref().is_some_and(|m| seed_mesos.contains(m)) {
                reach.meso.insert(pub_id.clone());
            }
            if draft.micro.as_ref().is_some_and(|m| seed_micros.contains(m)) {
                reach.micro.insert(pub_id.clone());
            }
            if chosen_b_id
                .get(&(p, draft_idx))
                .is_some_and(|id| harvested.contains(id))
            {
                reach.xid.insert(pub_id);
            }
        }
        reachable.insert(pid, reach);
    }

    // --- assembly ---------------------------------------------------------
    let corpus_a = Corpus::build(a_pubs, CorpusTag::A)?;
    let corpus_b = Corpus::build(b_pubs, CorpusTag::B)?;
    aliases.validate_covers(&registry)?;
    let gold_entries: BTreeMap<PersonId, BTreeSet<PubId>> = truth
        .iter()
        .filter(|(_, assignments)| !assignments.is_empty())
        .map(|(person, assignments)| {
            (
                person.clone(),
                assignments.iter().map(|(pub_id, _)| pub_id.clone()).collect(),
            )
        })
        .collect();
    let gold = GoldStandard::new(gold_entries, config.year_range)?;
    Ok(SynthOutput {
        registry,
        corpus_a,
        corpus_b,
        aliases,
        gold,
        ground_truth: GroundTruth { truth, reachable },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::namekit::person_key;

    fn small_config() -> SynthConfig {
        SynthConfig {
            n_persons: 40,
            n_pubs: 400,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn identical_configs_give_byte_identical_files() {
        let config = small_config();
        let out1 = generate(&config).unwrap();
        let out2 = generate(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (d1, d2) = (dir.path().join("one"), dir.path().join("two"));
        out1.write_all(&d1).unwrap();
        out2.write_all(&d2).unwrap();
        for name in [
            "persons.jsonl",
            "corpus_a.jsonl",
            "corpus_b.jsonl",
            "aliases.jsonl",
            "gold.jsonl",
            "ground_truth.jsonl",
            "reachability.jsonl",
        ] {
            let b1 = std::fs::read(d1.join(name)).unwrap();
            let b2 = std::fs::read(d2.join(name)).unwrap();
            assert_eq!(b1, b2, "{name} differs between identical runs");
        }
    }

    #[test]
    fn different_seeds_give_different_corpora() {
        let out1 = generate(&small_config()).unwrap();
        let out2 = generate(&SynthConfig {
            rng_seed: 43,
            ..small_config()
        })
        .unwrap();
        let titles = |c: &Corpus| {
            c.publications()
                .map(|p| p.biblio.title.clone())
                .collect::<Vec<_>>()
        };
        assert_ne!(titles(&out1.corpus_a), titles(&out2.corpus_a));
    }

    #[test]
    fn zero_homonym_rate_gives_distinct_keys() {
        let out = generate(&SynthConfig {
            homonym_rate: 0.0,
            ..small_config()
        })
        .unwrap();
        let keys: BTreeSet<NameKey> = out
            .registry
            .iter()
            .map(|p| person_key(p).unwrap())
            .collect();
        assert_eq!(keys.len(), out.registry.len());
    }

    #[test]
    fn homonym_rate_produces_shared_keys_at_safe_distances() {
        let out = generate(&SynthConfig {
            homonym_rate: 0.2,
            ..small_config()
        })
        .unwrap();
        let keys: Vec<NameKey> = out
            .registry
            .iter()
            .map(|p| person_key(p).unwrap())
            .collect();
        let distinct: BTreeSet<&NameKey> = keys.iter().collect();
        let sharers = keys.len() - distinct.len();
        assert!(sharers >= 2, "expected some deliberate homonyms");
        // Distances are never exactly 1: keys are equal or ≥ 2 apart.
        for (i, a) in keys.iter().enumerate() {
            for b in keys.iter().skip(i + 1) {
                if a.first_initial == b.first_initial {
                    assert_ne!(levenshtein(&a.last_name, &b.last_name), 1);
                }
            }
        }
    }

    #[test]
    fn every_registry_mention_folds_to_the_person_key() {
        let out = generate(&small_config()).unwrap();
        let key_of: BTreeMap<PersonId, NameKey> = out
            .registry
            .iter()
            .map(|p| (p.person_id.clone(), person_key(p).unwrap()))
            .collect();
        let mut checked = 0;
        for (person, assignments) in &out.ground_truth.truth {
            for (pub_id, position) in assignments {
                let mention = out.corpus_a.get(pub_id).unwrap().mention(*position).unwrap();
                assert_eq!(&normalize_name(&mention.raw_name).unwrap(), &key_of[person]);
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn linkage_fraction_tracks_coverage() {
        let out = generate(&SynthConfig::default()).unwrap();
        let with_links = out
            .corpus_a
            .publications()
            .filter(|p| p.author_affil_links.is_some())
            .count();
        let fraction = with_links as f64 / out.corpus_a.len() as f64;
        assert!(
            (fraction - 0.69).abs() <= 0.02,
            "linkage fraction {fraction} drifted from 0.69"
        );
    }

    #[test]
    fn reachability_is_a_subset_of_truth() {
        let out = generate(&small_config()).unwrap();
        for (person, reach) in &out.ground_truth.reachable {
            let truth_pubs: BTreeSet<&PubId> = out.ground_truth.truth[person]
                .iter()
                .map(|(pub_id, _)| pub_id)
                .collect();
            for set in [
                &reach.em, &reach.rp, &reach.dl, &reach.al, &reach.dai, &reach.seed, &reach.meso,
                &reach.micro, &reach.xid,
            ] {
                for pub_id in set {
                    assert!(truth_pubs.contains(pub_id));
                }
            }
            // Channel sets stay inside the seed union; expansions contain it.
            for channel in [&reach.em, &reach.rp, &reach.dl, &reach.al, &reach.dai] {
                assert!(channel.is_subset(&reach.seed));
            }
            for expansion in [&reach.meso, &reach.micro, &reach.xid] {
                assert!(reach.seed.is_subset(expansion));
            }
        }
    }

    #[test]
    fn first_pages_are_unique_per_corpus() {
        let out = generate(&small_config()).unwrap();
        let pages: BTreeSet<&str> = out
            .corpus_a
            .publications()
            .map(|p| p.biblio.first_page.as_str())
            .collect();
        assert_eq!(pages.len(), out.corpus_a.len());
    }

    #[test]
    fn infeasible_configs_are_rejected() {
        let bad_rate = SynthConfig {
            email_coverage: 1.5,
            ..SynthConfig::default()
        };
        assert!(generate(&bad_rate).is_err());
        let lonely_homonym = SynthConfig {
            n_persons: 1,
            homonym_rate: 0.5,
            ..SynthConfig::default()
        };
        assert!(generate(&lonely_homonym).is_err());
        let bad_window = SynthConfig {
            year_range: (2010, 2001),
            ..SynthConfig::default()
        };
        assert!(generate(&bad_window).is_err());
    }

    #[test]
    fn ground_truth_files_round_trip() {
        let out = generate(&small_config()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let truth_path = dir.path().join("ground_truth.jsonl");
        let reach_path = dir.path().join("reachability.jsonl");
        out.ground_truth.write(&truth_path, &reach_path).unwrap();
        let loaded = GroundTruth::load(&truth_path, &reach_path).unwrap();
        assert_eq!(loaded, out.ground_truth);
    }
}
