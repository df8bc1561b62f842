//! Padded Uniform Random Blobs.
//!
//! A PURB is an encrypted blob with no cleartext metadata: without a matching
//! key it cannot be told apart from random bytes, and its length is padded with
//! Padmé so that it leaks little about the payload size. One blob can be
//! addressed to many recipients, possibly using different cipher suites, and
//! to passphrase holders.
//!
//! ```
//! use purb::codec::{decode, encode, DecodeOptions, EncodeConfig, Identity, Recipient};
//! use purb::padme::PadSpec;
//! use purb::suite::{keygen_hidden, Registry};
//! use rand::SeedableRng;
//!
//! let mut rng = rand::rngs::ChaCha20Rng::seed_from_u64(1); // tests only
//! let suite = Registry::standard().by_alias("B").unwrap();
//! let kp = keygen_hidden(suite, &mut rng).unwrap();
//! let to = [Recipient::PublicKey { suite: suite.id, pk: kp.pk.clone() }];
//! let blob = encode(&to, b"hi", PadSpec::Padme, &mut rng, &EncodeConfig::default()).unwrap();
//! let me = Identity::SecretKey { suite: suite.id, sk: kp.sk };
//! let (payload, _stats) = decode(&blob.bytes, &me, &DecodeOptions::default()).unwrap();
//! assert_eq!(payload, b"hi");
//! ```

pub mod analyzer;
pub mod bench;
pub mod codec;
pub mod layout;
pub mod padme;
pub mod suite;
