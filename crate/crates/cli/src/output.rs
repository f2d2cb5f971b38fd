use clap::ValueEnum;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "fptlab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

/// One command result in all three renderings.
pub struct Document {
    command: &'static str,
    body: Value,
    tsv: String,
    pretty: String,
}

impl Document {
    pub fn new(command: &'static str, body: Value, tsv: String, pretty: String) -> Self {
        Document {
            command,
            body,
            tsv,
            pretty,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut map = Map::new();
                map.insert("schema".into(), Value::from(SCHEMA));
                map.insert("command".into(), Value::from(self.command));
                map.insert("result".into(), self.body.clone());
                let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("valid json");
                out.push('\n');
                out
            }
            Format::Tsv => self.tsv.clone(),
            Format::Pretty => self.pretty.clone(),
        }
    }
}
