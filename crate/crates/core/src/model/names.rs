use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(symbol: impl AsRef<str>) -> Self {
                $name(Arc::from(symbol.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({:?})", stringify!($name), &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name::new(s)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }
    };
}

name_type!(
    /// A concept name. `Top` and `Bot` are reserved for ⊤ and ⊥.
    ConceptName
);
name_type!(RoleName);
name_type!(IndividualName);

pub const TOP_SYMBOL: &str = "Top";
pub const BOT_SYMBOL: &str = "Bot";

impl ConceptName {
    pub fn top() -> Self {
        ConceptName::new(TOP_SYMBOL)
    }

    pub fn bot() -> Self {
        ConceptName::new(BOT_SYMBOL)
    }

    pub fn is_top(&self) -> bool {
        self.as_str() == TOP_SYMBOL
    }

    pub fn is_bot(&self) -> bool {
        self.as_str() == BOT_SYMBOL
    }
}
